use fadecap::sim::MiEstimate;

pub const CSV_HEADER: &str = "rho,beta,upper_nats,upper_over_rho2,limit,mi_est,mi_stderr,mi_ci_lo,mi_ci_hi,formula_tag";

/// `%.9g`: nine significant digits, trailing zeros dropped, exponent form
/// when the decimal exponent is below -4 or above 8.
pub fn fmt_g9(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row {
    pub rho: Option<f64>,
    pub beta: f64,
    pub upper: Option<f64>,
    pub upper_over_rho2: Option<f64>,
    pub limit: Option<f64>,
    pub mi: Option<MiEstimate>,
    pub formula_tag: String,
}

impl Row {
    pub fn to_csv(&self) -> String {
        let f = |v: Option<f64>| v.map(fmt_g9).unwrap_or_default();
        [
            f(self.rho),
            fmt_g9(self.beta),
            f(self.upper),
            f(self.upper_over_rho2),
            f(self.limit),
            f(self.mi.map(|m| m.mi_per_use)),
            f(self.mi.map(|m| m.std_err)),
            f(self.mi.map(|m| m.ci95.0)),
            f(self.mi.map(|m| m.ci95.1)),
            self.formula_tag.clone(),
        ]
        .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(fmt_g9(0.0), "0");
        assert_eq!(fmt_g9(1.0), "1");
        assert_eq!(fmt_g9(0.5), "0.5");
        assert_eq!(fmt_g9(0.81 / 0.19), "4.26315789");
        assert_eq!(fmt_g9(-2.0 / 3.0), "-0.666666667");
        assert_eq!(fmt_g9(123456789.0), "123456789");
        assert_eq!(fmt_g9(1234567890.0), "1.23456789e9");
        assert_eq!(fmt_g9(1e-4), "0.0001");
        assert_eq!(fmt_g9(1.5e-5), "1.5e-5");
        assert_eq!(fmt_g9(9.9999999999e-6), "1e-5");
        assert_eq!(fmt_g9(0.059660101141609634), "0.0596601011");
        assert_eq!(fmt_g9(f64::NAN), "NaN");
    }

    #[test]
    fn empty_fields_for_missing_values() {
        let r = Row {
            beta: 1.0,
            limit: Some(0.125),
            formula_tag: "prop2".into(),
            ..Row::default()
        };
        assert_eq!(r.to_csv(), ",1,,,0.125,,,,,prop2");
        assert_eq!(CSV_HEADER.split(',').count(), r.to_csv().split(',').count());
    }
}
