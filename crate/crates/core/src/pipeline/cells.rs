use crate::linreg::{CoefficientTest, Significance};

fn sign(x: f64) -> &'static str {
    if x < 0.0 {
        "-"
    } else {
        "+"
    }
}

/// `(+)**`: sign and stars of a coefficient significant at 10%, otherwise
/// empty.
pub fn long_run_cell(c: &CoefficientTest) -> String {
    let s = Significance::from_p_value(c.p_value);
    if !s.is_significant() {
        return String::new();
    }
    format!("({}){}", sign(c.estimate), s.stars())
}

/// `(±)2**`: aggregate over the lags of one variable. The digit counts the
/// lags significant at 10% (the contemporaneous term included), the sign is
/// `+` or `-` when all of them agree and `±` otherwise, and the stars are
/// those of the weakest significant lag.
pub fn short_run_cell(coefs: &[CoefficientTest]) -> String {
    let sig: Vec<&CoefficientTest> = coefs
        .iter()
        .filter(|c| Significance::from_p_value(c.p_value).is_significant())
        .collect();
    if sig.is_empty() {
        return String::new();
    }
    let pos = sig.iter().filter(|c| c.estimate >= 0.0).count();
    let sign = if pos == sig.len() {
        "+"
    } else if pos == 0 {
        "-"
    } else {
        "±"
    };
    let weakest = sig
        .iter()
        .map(|c| Significance::from_p_value(c.p_value))
        .min()
        .expect("non-empty");
    format!("({sign}){}{}", sig.len(), weakest.stars())
}
