//! Nonnegative quantities that may be infinite.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub const ZERO: Extended = Extended::Finite(0.0);

    pub fn from_f64(x: f64) -> Self {
        if x.is_infinite() && x > 0.0 {
            Extended::Infinite
        } else {
            Extended::Finite(x)
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Extended::Finite(x) => Some(*x),
            Extended::Infinite => None,
        }
    }

    /// f64 view with +inf for the infinite case.
    pub fn to_f64(&self) -> f64 {
        self.value().unwrap_or(f64::INFINITY)
    }

    pub fn powf(self, e: f64) -> Self {
        match self {
            Extended::Finite(x) => Extended::from_f64(x.powf(e)),
            Extended::Infinite if e > 0.0 => Extended::Infinite,
            Extended::Infinite if e == 0.0 => Extended::Finite(1.0),
            Extended::Infinite => Extended::ZERO,
        }
    }
}

impl From<f64> for Extended {
    fn from(x: f64) -> Self {
        Extended::from_f64(x)
    }
}

impl std::ops::Add for Extended {
    type Output = Extended;
    fn add(self, rhs: Extended) -> Extended {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::from_f64(a + b),
            _ => Extended::Infinite,
        }
    }
}

impl std::ops::Mul<f64> for Extended {
    type Output = Extended;
    fn mul(self, rhs: f64) -> Extended {
        match self {
            Extended::Finite(a) => Extended::from_f64(a * rhs),
            Extended::Infinite if rhs == 0.0 => Extended::ZERO,
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl std::fmt::Display for Extended {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Extended::Finite(x) => write!(f, "{x}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(x) => s.serialize_f64(*x),
            Extended::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Extended {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(x) => Ok(Extended::Finite(x)),
            Raw::Text(t) if t == "inf" => Ok(Extended::Infinite),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {t:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_ordering() {
        let a = Extended::Finite(2.0);
        assert_eq!(a + Extended::Infinite, Extended::Infinite);
        assert_eq!(Extended::Infinite * 0.0, Extended::ZERO);
        assert_eq!(Extended::Infinite.powf(-0.5), Extended::ZERO);
        assert!(a < Extended::Infinite);
        assert_eq!(Extended::from_f64(f64::INFINITY), Extended::Infinite);
    }

    #[test]
    fn json_form() {
        let v = vec![Extended::Finite(1.5), Extended::Infinite];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[1.5,"inf"]"#);
        let back: Vec<Extended> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
