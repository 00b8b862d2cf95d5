use std::fmt;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

/// Which route produced a fidelity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Closed,
    Wall,
    Sum,
    Transfer,
    Twirl,
    Mc,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Wall => "wall",
            Method::Sum => "sum",
            Method::Transfer => "transfer",
            Method::Twirl => "twirl",
            Method::Mc => "mc",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        Some(match s {
            "closed" => Method::Closed,
            "wall" => Method::Wall,
            "sum" => Method::Sum,
            "transfer" => Method::Transfer,
            "twirl" => Method::Twirl,
            "mc" => Method::Mc,
            _ => return None,
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(BigRational),
    Real(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Value::Real(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(r) => Some(r),
            Value::Real(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => write!(f, "{r}"),
            Value::Real(x) => write!(f, "{x:.15e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityResult {
    pub value: Value,
    pub method: Method,
    /// Standard error of the mean, Monte Carlo only.
    pub stderr: Option<f64>,
}

impl FidelityResult {
    pub fn exact(value: BigRational, method: Method) -> Self {
        FidelityResult { value: Value::Exact(value), method, stderr: None }
    }

    pub fn real(value: f64, method: Method) -> Self {
        FidelityResult { value: Value::Real(value), method, stderr: None }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Panics when the value is not exact; meant for tests and exact routes.
    pub fn rational(&self) -> &BigRational {
        self.value.exact().expect("fidelity is not an exact rational")
    }
}
