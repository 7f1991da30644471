use std::sync::OnceLock;

use crate::{Error, Result};

const LN_FACTORIAL_TABLE: usize = 512;

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(LN_FACTORIAL_TABLE);
        t.push(0.0);
        for k in 1..LN_FACTORIAL_TABLE {
            t.push(t[k - 1] + (k as f64).ln());
        }
        t
    })
}

/// `ln(n!)`, tabulated below 512 and summed beyond.
pub fn ln_factorial(n: u64) -> f64 {
    let t = table();
    if (n as usize) < t.len() {
        t[n as usize]
    } else {
        t[t.len() - 1] + ((t.len() as u64)..=n).map(|k| (k as f64).ln()).sum::<f64>()
    }
}

fn check_pair(tj: i64, tm: i64) -> Result<()> {
    if tj < 0 || tm.abs() > tj || (tj - tm) % 2 != 0 {
        return Err(Error::InvalidLabel(format!("j = {tj}/2, m = {tm}/2")));
    }
    Ok(())
}

/// Clebsch-Gordan coefficient `⟨j1 m1; j2 m2 | J M⟩` (Condon-Shortley).
///
/// All labels are passed doubled (`2j`, `2m`) so half-integers are exact.
/// Evaluated with the Racah sum, accumulating factorials in log space.
pub fn clebsch_gordan(tj1: i64, tm1: i64, tj2: i64, tm2: i64, tj: i64, tm: i64) -> Result<f64> {
    check_pair(tj1, tm1)?;
    check_pair(tj2, tm2)?;
    check_pair(tj, tm)?;
    if tm != tm1 + tm2 {
        return Ok(0.0);
    }
    if tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return Ok(0.0);
    }
    // integer arguments of the factorials
    let a = (tj + tj1 - tj2) / 2; // J + j1 − j2
    let b = (tj - tj1 + tj2) / 2; // J − j1 + j2
    let c = (tj1 + tj2 - tj) / 2; // j1 + j2 − J
    let d = (tj1 + tj2 + tj) / 2 + 1; // j1 + j2 + J + 1
    let jpm = (tj + tm) / 2;
    let jmm = (tj - tm) / 2;
    let j1m = (tj1 - tm1) / 2;
    let j1p = (tj1 + tm1) / 2;
    let j2m = (tj2 - tm2) / 2;
    let j2p = (tj2 + tm2) / 2;

    let lf = |n: i64| ln_factorial(n as u64);
    let ln_prefactor = 0.5
        * (((tj + 1) as f64).ln() + lf(a) + lf(b) + lf(c) - lf(d)
            + lf(jpm)
            + lf(jmm)
            + lf(j1m)
            + lf(j1p)
            + lf(j2m)
            + lf(j2p));

    // k runs over values keeping every factorial argument non-negative
    let e = (tj - tj2 + tm1) / 2; // J − j2 + m1
    let f = (tj - tj1 - tm2) / 2; // J − j1 − m2
    let k_min = 0.max(-e).max(-f);
    let k_max = c.min(j1m).min(j2p);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let ln_den = lf(k) + lf(c - k) + lf(j1m - k) + lf(j2p - k) + lf(e + k) + lf(f + k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * (ln_prefactor - ln_den).exp();
    }
    Ok(sum)
}
