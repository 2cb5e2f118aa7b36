use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Constants of the reference shape `rho(x)`.
///
/// `c` defaults to 0.8178146. `d` has no default and must be supplied
/// before [`rho_reference`] can be evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FordConstants {
    pub c: f64,
    pub d: Option<f64>,
}

impl Default for FordConstants {
    fn default() -> Self {
        FordConstants {
            c: 0.817_814_6,
            d: None,
        }
    }
}

impl FordConstants {
    pub fn with_d(d: f64) -> Self {
        FordConstants {
            d: Some(d),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0) || !self.c.is_finite() {
            return Err(Error::InvalidInput(format!("C must be positive, got {}", self.c)));
        }
        if self.d.is_some_and(|d| !d.is_finite()) {
            return Err(Error::InvalidInput("D must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RhoValue {
    pub value: f64,
    /// The four-fold logarithm was not positive and its term was dropped.
    pub shape_only: bool,
}

/// `rho(x) = exp(C log^2(l2/l3) + D l3 + (D + 1/2 - 2C) l4) / log x`, where
/// `lj` is the j-fold iterated logarithm of `x`.
pub fn rho_reference(x: f64, consts: &FordConstants) -> Result<RhoValue> {
    consts.validate()?;
    let d = consts.d.ok_or_else(|| {
        Error::InvalidInput("the constant D must be configured before rho is evaluated".into())
    })?;
    if !(x >= 16.0) || !x.is_finite() {
        return Err(Error::Domain(format!("rho needs x >= 16, got {x}")));
    }
    let l1 = x.ln();
    let l2 = l1.ln();
    let l3 = l2.ln();
    if !(l3 > 0.0) {
        return Err(Error::Domain(format!("log log log x is not positive at x = {x}")));
    }
    let c = consts.c;
    let mut arg = c * (l2 / l3).ln().powi(2) + d * l3;
    let l4 = l3.ln();
    let shape_only = !(l4 > 0.0);
    if !shape_only {
        arg += (d + 0.5 - 2.0 * c) * l4;
    }
    Ok(RhoValue {
        value: arg.exp() / l1,
        shape_only,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn requires_d() {
        assert!(rho_reference(1e10, &FordConstants::default()).is_err());
    }

    #[test]
    fn domain_errors() {
        let f = FordConstants::with_d(0.0);
        assert!(matches!(rho_reference(15.0, &f), Err(Error::Domain(_))));
        assert!(rho_reference(f64::NAN, &f).is_err());
        assert!(rho_reference(16.0, &f).is_ok());
        let bad = FordConstants { c: -1.0, d: Some(0.0) };
        assert!(rho_reference(1e10, &bad).is_err());
    }

    #[test]
    fn high_precision_reference_values() {
        // independent 30-digit evaluations of the displayed formula
        let v = rho_reference(1e10, &FordConstants::with_d(0.0)).unwrap();
        assert!(!v.shape_only);
        assert!((v.value / 0.085_833_402_733_637_003_3 - 1.0).abs() < 1e-12, "{}", v.value);
        let v = rho_reference(1e10, &FordConstants::with_d(2.176_968_7)).unwrap();
        assert!((v.value / 1.383_319_121_125_619_40 - 1.0).abs() < 1e-12, "{}", v.value);
    }

    #[test]
    fn shape_only_below_threshold() {
        let f = FordConstants::with_d(1.0);
        assert!(rho_reference(1e6, &f).unwrap().shape_only);
        assert!(!rho_reference(1e7, &f).unwrap().shape_only);
    }

    #[test]
    fn square_term_equal_to_c() {
        // pick x with log log x / log log log x = e
        let c = 0.8178146;
        let d = 1.5;
        // l2 = e is the only solution of l2 = e ln(l2)
        let l2 = std::f64::consts::E;
        let x = l2.exp().exp();
        let l3 = l2.ln();
        let want = (c + d * l3).exp() / x.ln();
        let got = rho_reference(x, &FordConstants { c, d: Some(d) }).unwrap().value;
        assert!((got / want - 1.0).abs() < 1e-9);
    }

    #[test]
    fn increasing_in_c() {
        let x = 1e30;
        let a = rho_reference(x, &FordConstants { c: 0.5, d: Some(1.0) }).unwrap().value;
        let b = rho_reference(x, &FordConstants { c: 0.9, d: Some(1.0) }).unwrap().value;
        let l2 = x.ln().ln();
        assert!(l2 > std::f64::consts::E * l2.ln());
        assert!(a < b);
    }
}
