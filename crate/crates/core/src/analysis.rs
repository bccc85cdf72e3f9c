//! Search-range probability calculus and performance ratios.
//!
//! For a symbol with content `r`, the probability that it shows up within the
//! next `L` characters of every one of `k` random sequences is
//! `(1 - (1 - r)^L)^k`. Inverting that gives the search range needed for a
//! target probability. With evenly distributed symbols `r = 1/|Σ|`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::lcs2_len;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioReport {
    pub reference_len: f64,
    pub cs_len: f64,
    pub ratio: f64,
}

/// `|reference| / |cs|`; lower is better and 1 is optimal.
///
/// Lengths are real-valued so averaged table cells can be compared.
pub fn performance_ratio(reference_len: f64, cs_len: f64) -> Result<RatioReport> {
    if reference_len.is_nan() || reference_len < 0.0 {
        return Err(Error::invalid("reference_len", "must be non-negative"));
    }
    if cs_len <= 0.0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(RatioReport {
        reference_len,
        cs_len,
        ratio: reference_len / cs_len,
    })
}

fn check_probability(field: &'static str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("{p} is not in (0, 1)")))
    }
}

fn check_at_least(field: &'static str, v: u64, min: u64) -> Result<()> {
    if v >= min {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("{v} is below {min}")))
    }
}

/// Lower bound on the search range: `ceil(n / E|LCS|)`.
pub fn range_lower_bound(n: u64, expected_lcs: f64) -> Result<u64> {
    check_at_least("n", n, 1)?;
    if expected_lcs.is_nan() || expected_lcs <= 0.0 {
        return Err(Error::invalid("expected_lcs", "must be positive"));
    }
    Ok((n as f64 / expected_lcs).ceil() as u64)
}

/// Probability that a symbol of content `r` occurs within range `l` of every
/// one of `k` sequences.
pub fn existence_probability(r: f64, l: u64, k: u64) -> Result<f64> {
    check_probability("r", r)?;
    check_at_least("L", l, 1)?;
    check_at_least("k", k, 1)?;
    Ok((1.0 - (1.0 - r).powf(l as f64)).powf(k as f64))
}

/// Real-valued search range reaching existence probability `p`; ceil it for
/// an integer range.
pub fn range_for_probability(p: f64, k: u64, r: f64) -> Result<f64> {
    check_probability("P", p)?;
    check_probability("r", r)?;
    check_at_least("k", k, 1)?;
    Ok((1.0 - p.powf(1.0 / k as f64)).ln() / (1.0 - r).ln())
}

pub fn existence_probability_uniform(sigma: u64, l: u64, k: u64) -> Result<f64> {
    check_at_least("sigma", sigma, 2)?;
    check_at_least("L", l, 1)?;
    check_at_least("k", k, 1)?;
    let miss = (sigma - 1) as f64 / sigma as f64;
    Ok((1.0 - miss.powf(l as f64)).powf(k as f64))
}

pub fn range_for_probability_uniform(p: f64, k: u64, sigma: u64) -> Result<f64> {
    check_probability("P", p)?;
    check_at_least("sigma", sigma, 2)?;
    check_at_least("k", k, 1)?;
    let miss = (sigma - 1) as f64 / sigma as f64;
    Ok((1.0 - p.powf(1.0 / k as f64)).ln() / miss.ln())
}

/// Expected LCS length when every accepted symbol advances fronts by `L/2`
/// on average: `2n/L - 1`.
pub fn expected_lcs_estimate(n: u64, l: u64) -> Result<f64> {
    check_at_least("L", l, 1)?;
    if n < l {
        return Err(Error::invalid("n", format!("{n} is below L = {l}")));
    }
    Ok(2.0 * n as f64 / l as f64 - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stddev: f64,
}

/// Monte Carlo mean and (population) standard deviation of the LCS length of
/// two independent uniform random sequences of length `n` over `sigma`
/// symbols. Trial `t` draws from the ChaCha8 stream `t` of `seed`.
pub fn estimate_pairwise_elcs(n: usize, sigma: u32, trials: usize, seed: u64) -> Result<Estimate> {
    check_at_least("trials", trials as u64, 1)?;
    check_at_least("sigma", sigma as u64, 1)?;
    let lens: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let a: Vec<u32> = (0..n).map(|_| rng.gen_range(0..sigma)).collect();
            let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..sigma)).collect();
            lcs2_len(&a, &b) as f64
        })
        .collect();
    let mean = lens.iter().sum::<f64>() / trials as f64;
    let var = lens.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / trials as f64;
    Ok(Estimate {
        mean,
        stddev: var.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ratio_examples() {
        let r = performance_ratio(56.60, 29.05).unwrap();
        assert!(close(r.ratio, 1.948, 5e-4), "{}", r.ratio);
        assert_eq!(performance_ratio(10.0, 10.0).unwrap().ratio, 1.0);
        assert_eq!(performance_ratio(5.0, 0.0), Err(Error::UndefinedRatio));
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(range_lower_bound(100, 65.24).unwrap(), 2);
        assert_eq!(range_lower_bound(25, 4.44).unwrap(), 6);
        assert_eq!(range_lower_bound(37, 37.0).unwrap(), 1);
        assert!(range_lower_bound(0, 1.0).is_err());
        assert!(range_lower_bound(10, 0.0).is_err());
    }

    #[test]
    fn existence_examples() {
        assert_eq!(existence_probability(0.5, 1, 1).unwrap(), 0.5);
        let p = existence_probability(0.5, 11, 100).unwrap();
        assert!(close(p, 0.95, 0.01), "{p}");
        assert!(p >= 0.95);
        let mut last = 0.0;
        for l in 1..200 {
            let p = existence_probability(0.3, l, 50).unwrap();
            assert!(p >= last);
            last = p;
        }
        assert!(close(last, 1.0, 1e-9));
        assert!(existence_probability(1.0, 1, 1).is_err());
        assert!(existence_probability(0.5, 0, 1).is_err());
    }

    #[test]
    fn range_examples() {
        // Frozen from direct evaluation of log(1 - P^(1/k)) / log(1 - r).
        let l = range_for_probability(0.95, 100, 0.5).unwrap();
        assert!(close(l, 10.9293, 1e-3), "{l}");
        assert_eq!(l.ceil(), 11.0);
        let l = range_for_probability(0.95, 100, 0.8).unwrap();
        assert!(close(l, 4.7070, 1e-3), "{l}");
        assert_eq!(l.ceil(), 5.0);
        let l = range_for_probability(0.05, 100, 0.5).unwrap();
        assert!(close(l, 5.0825, 1e-3), "{l}");
        assert!(range_for_probability(1.0, 100, 0.5).is_err());
    }

    #[test]
    fn uniform_examples() {
        assert_eq!(existence_probability_uniform(2, 1, 1).unwrap(), 0.5);
        let p = existence_probability_uniform(4, 40, 5000).unwrap();
        assert!(close(p, 0.95, 0.01), "{p}");
        let l = range_for_probability_uniform(0.95, 5000, 4).unwrap();
        assert!(close(l, 39.9, 0.1), "{l}");
        let l = range_for_probability_uniform(0.95, 250, 20).unwrap();
        assert!(close(l, 165.5, 0.5), "{l}");
        assert!(close(
            range_for_probability_uniform(0.5, 1, 2).unwrap(),
            1.0,
            1e-12
        ));
        assert!(existence_probability_uniform(1, 1, 1).is_err());
    }

    #[test]
    fn uniform_is_content_special_case() {
        for sigma in 2..30u64 {
            for l in [1u64, 3, 10, 40] {
                for k in [1u64, 10, 1000] {
                    let a = existence_probability_uniform(sigma, l, k).unwrap();
                    let b = existence_probability(1.0 / sigma as f64, l, k).unwrap();
                    assert!(close(a, b, 1e-12));
                }
            }
        }
    }

    #[test]
    fn roundtrip_brackets_target() {
        for &p in &[0.05, 0.5, 0.95] {
            for &k in &[1u64, 10, 100, 1000] {
                for &r in &[0.1, 0.25, 0.5, 0.8] {
                    let l = range_for_probability(p, k, r).unwrap();
                    let hi = existence_probability(r, l.ceil().max(1.0) as u64, k).unwrap();
                    assert!(hi >= p - 1e-12, "p={p} k={k} r={r}");
                    if l.floor() >= 1.0 {
                        let lo = existence_probability(r, l.floor() as u64, k).unwrap();
                        assert!(lo <= p + 1e-12);
                    }
                }
                for sigma in [2u64, 4, 20, 100] {
                    let l = range_for_probability_uniform(p, k, sigma).unwrap();
                    let hi =
                        existence_probability_uniform(sigma, l.ceil().max(1.0) as u64, k).unwrap();
                    assert!(hi >= p - 1e-12);
                    if l.floor() >= 1.0 {
                        let lo = existence_probability_uniform(sigma, l.floor() as u64, k).unwrap();
                        assert!(lo <= p + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_on_grid() {
        let rs = [0.05, 0.2, 0.5, 0.8, 0.95];
        for k in [1u64, 5, 50] {
            for l in 1..20u64 {
                for w in rs.windows(2) {
                    assert!(
                        existence_probability(w[0], l, k).unwrap()
                            < existence_probability(w[1], l, k).unwrap()
                    );
                }
                for &r in &rs {
                    let p = existence_probability(r, l, k).unwrap();
                    let next_l = existence_probability(r, l + 1, k).unwrap();
                    let next_k = existence_probability(r, l, k + 1).unwrap();
                    // Strictness is lost once the value rounds to 1.0.
                    if p < 1.0 {
                        assert!(next_l > p);
                        assert!(next_k < p);
                    }
                }
            }
        }
    }

    #[test]
    fn expected_lcs_examples() {
        assert_eq!(expected_lcs_estimate(1000, 50).unwrap(), 39.0);
        assert_eq!(expected_lcs_estimate(7, 7).unwrap(), 1.0);
        assert_eq!(expected_lcs_estimate(100, 2).unwrap(), 99.0);
        assert!(expected_lcs_estimate(1, 2).is_err());
    }

    #[test]
    fn unary_alphabet_gives_full_length() {
        let e = estimate_pairwise_elcs(37, 1, 5, 9).unwrap();
        assert_eq!(e.mean, 37.0);
        assert_eq!(e.stddev, 0.0);
    }

    #[test]
    fn estimate_is_seeded() {
        let a = estimate_pairwise_elcs(30, 4, 20, 3).unwrap();
        assert_eq!(a, estimate_pairwise_elcs(30, 4, 20, 3).unwrap());
        assert_ne!(a, estimate_pairwise_elcs(30, 4, 20, 4).unwrap());
    }

    #[test]
    fn estimate_grows_linearly() {
        let a = estimate_pairwise_elcs(100, 4, 200, 11).unwrap().mean / 100.0;
        let b = estimate_pairwise_elcs(200, 4, 200, 11).unwrap().mean / 200.0;
        assert!((a - b).abs() / b <= 0.03, "{a} vs {b}");
    }
}
