//! Analytic values on the canonical instances, kept in one place so tests
//! compare against named quantities.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClosedFormParams {
    pub q: f64,
    pub eps: f64,
    pub n: usize,
}

/// `kind` is one of `I1`, `I2`, `I4`; `quantity` names the value:
///
/// * `I1`: `lp_lower`, `online_opt`
/// * `I2`: `lp_lower`
/// * `I4`: `lp`, `follow_exante`, `sn`, `sdn`
pub fn closed_form_value(kind: &str, quantity: &str, params: ClosedFormParams) -> Result<f64> {
    let ClosedFormParams { q, eps, n } = params;
    let value = match (kind, quantity) {
        ("I1", "lp_lower") => eps * (2.0 - q - (1.0 - q) * eps) / (1.0 - q),
        ("I1", "online_opt") => eps / (1.0 - q),
        ("I2", "lp_lower") => n as f64,
        ("I4", "lp") => eps + q,
        ("I4", "follow_exante") => eps + q * q,
        ("I4", "sn") => q,
        ("I4", "sdn") => (eps + q) / (2.0 - q),
        _ => {
            return Err(Error::InvalidParameter(format!(
                "no closed form for ({kind}, {quantity})"
            )))
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reference_values() {
        let p = ClosedFormParams { q: 0.1, eps: 1e-3, n: 0 };
        assert_abs_diff_eq!(closed_form_value("I4", "lp", p).unwrap(), 0.101, epsilon = 1e-15);
        assert_abs_diff_eq!(closed_form_value("I4", "sn", p).unwrap(), 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(closed_form_value("I4", "follow_exante", p).unwrap(), 0.011, epsilon = 1e-15);
        assert_abs_diff_eq!(closed_form_value("I4", "sdn", p).unwrap(), 0.05316, epsilon = 1e-5);
        let n4 = ClosedFormParams { n: 4, ..Default::default() };
        assert_eq!(closed_form_value("I2", "lp_lower", n4).unwrap(), 4.0);
        let zero = ClosedFormParams { q: 0.0, eps: 1e-3, n: 0 };
        assert_abs_diff_eq!(closed_form_value("I1", "online_opt", zero).unwrap(), 1e-3, epsilon = 1e-15);
        assert!(closed_form_value("I3", "lp", p).is_err());
    }
}
