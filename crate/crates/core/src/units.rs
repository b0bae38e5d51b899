//! dB / linear conversions. Powers in dBm are referenced to 1 mW.

#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[inline]
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

#[inline]
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * db_to_linear(dbm)
}

#[inline]
pub fn watts_to_dbm(watts: f64) -> f64 {
    linear_to_db(watts / 1e-3)
}

/// Combines ratios given in dB by summing their inverses in linear units.
///
/// Infinite entries contribute nothing; an empty or all-infinite input yields +inf.
pub fn inverse_sum_db(terms_db: impl IntoIterator<Item = f64>) -> f64 {
    let inv: f64 = terms_db
        .into_iter()
        .filter(|t| t.is_finite())
        .map(|t| 1.0 / db_to_linear(t))
        .sum();
    if inv == 0.0 {
        f64::INFINITY
    } else {
        -linear_to_db(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [-30.0, -3.0, 0.0, 16.0, 26.0] {
            assert!((watts_to_dbm(dbm_to_watts(x)) - x).abs() < 1e-12);
        }
        assert_eq!(dbm_to_watts(0.0), 1e-3);
    }

    #[test]
    fn inverse_sum_of_equal_terms_loses_three_db() {
        let r = inverse_sum_db([20.0, 20.0]);
        assert!((r - (20.0 - linear_to_db(2.0))).abs() < 1e-12);
        assert_eq!(inverse_sum_db([f64::INFINITY]), f64::INFINITY);
        assert!((inverse_sum_db([f64::INFINITY, 12.0]) - 12.0).abs() < 1e-12);
    }
}
