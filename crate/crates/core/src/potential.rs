use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest argument accepted by the exponential nonlinearity.
pub const EXP_LIMIT: f64 = 700.0;

/// Nonlinearity of u'''' + β²u'' + V_u(u) = 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Potential {
    /// V(u) = e^u - u - 1
    Bridge,
    /// V(u) = u²(u+2)²/4
    SwiftHohenbergShifted,
}

impl Potential {
    pub fn v(self, u: f64) -> f64 {
        match self {
            Potential::Bridge => u.exp_m1() - u,
            Potential::SwiftHohenbergShifted => 0.25 * u * u * (u + 2.0) * (u + 2.0),
        }
    }

    pub fn v_u(self, u: f64) -> f64 {
        match self {
            Potential::Bridge => u.exp_m1(),
            Potential::SwiftHohenbergShifted => u * (u * (u + 3.0) + 2.0),
        }
    }

    pub fn v_uu(self, u: f64) -> f64 {
        match self {
            Potential::Bridge => u.exp(),
            Potential::SwiftHohenbergShifted => 3.0 * u * u + 6.0 * u + 2.0,
        }
    }

    /// Potential term of the first integral; equals V for both models.
    pub fn v_poho(self, u: f64) -> f64 {
        self.v(u)
    }

    /// V_uu(0).
    pub fn c0(self) -> f64 {
        match self {
            Potential::Bridge => 1.0,
            Potential::SwiftHohenbergShifted => 2.0,
        }
    }

    /// Errors if `u` would overflow the exponential.
    pub fn check_range(self, u: &[f64]) -> Result<()> {
        if self == Potential::Bridge {
            if let Some(&bad) = u.iter().find(|&&v| v > EXP_LIMIT) {
                return Err(Error::Overflow(bad));
            }
        }
        Ok(())
    }

    pub fn label(self) -> &'static str {
        match self {
            Potential::Bridge => "bridge",
            Potential::SwiftHohenbergShifted => "swift_hohenberg_shifted",
        }
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Potential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bridge" => Ok(Potential::Bridge),
            "sh" | "swift_hohenberg_shifted" | "swift-hohenberg" => {
                Ok(Potential::SwiftHohenbergShifted)
            }
            other => Err(invalid(format!(
                "unknown potential `{other}` (bridge | sh)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vanishes_at_origin() {
        for p in [Potential::Bridge, Potential::SwiftHohenbergShifted] {
            assert_eq!(p.v(0.0), 0.0);
            assert_eq!(p.v_u(0.0), 0.0);
            assert_eq!(p.v_uu(0.0), p.c0());
        }
    }

    #[test]
    fn sh_polynomial_identity() {
        let p = Potential::SwiftHohenbergShifted;
        for i in 0..200 {
            let u = -3.0 + 0.025 * i as f64;
            let quartic = u.powi(4) / 4.0 + u.powi(3) + u * u;
            assert!((p.v(u) - quartic).abs() < 1e-12 * (1.0 + quartic.abs()));
            assert!(
                (p.v_u(u) - (u.powi(3) + 3.0 * u * u + 2.0 * u)).abs()
                    < 1e-12 * (1.0 + u.abs().powi(3))
            );
        }
    }

    #[test]
    fn derivatives_match_differences() {
        for p in [Potential::Bridge, Potential::SwiftHohenbergShifted] {
            for &u in &[-2.5, -1.0, -0.1, 0.3, 1.2] {
                let h = 1e-5;
                let dv = (p.v(u + h) - p.v(u - h)) / (2.0 * h);
                let dvu = (p.v_u(u + h) - p.v_u(u - h)) / (2.0 * h);
                assert!((dv - p.v_u(u)).abs() < 1e-8);
                assert!((dvu - p.v_uu(u)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn parse_labels() {
        assert_eq!("bridge".parse::<Potential>().unwrap(), Potential::Bridge);
        assert_eq!(
            "sh".parse::<Potential>().unwrap(),
            Potential::SwiftHohenbergShifted
        );
        assert!("x".parse::<Potential>().is_err());
        assert!(Potential::Bridge.check_range(&[701.0]).is_err());
    }
}
