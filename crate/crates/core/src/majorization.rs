//! Majorization pre-orders on real vectors, with signed margins.

use crate::error::{Error, Result};

/// Absolute tolerance (log space for [`log_majorizes`]).
pub const DEFAULT_MAJORIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorizationVerdict {
    pub holds: bool,
    /// Smallest slack over all partial-sum conditions; negative when violated.
    pub worst_margin: f64,
    /// 1-based `k` of the worst violated condition.
    pub failing_index: Option<usize>,
}

impl MajorizationVerdict {
    fn from_margins(margins: impl IntoIterator<Item = f64>, tol: f64) -> Self {
        let mut worst = f64::INFINITY;
        let mut at = 0;
        for (k, m) in margins.into_iter().enumerate() {
            if m < worst {
                worst = m;
                at = k + 1;
            }
        }
        if worst == f64::INFINITY {
            worst = 0.0;
        }
        let holds = worst >= -tol;
        MajorizationVerdict {
            holds,
            worst_margin: worst,
            failing_index: if holds { None } else { Some(at) },
        }
    }
}

fn check_pair(y: &[f64], x: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::input(format!(
            "vectors differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(Error::input("NaN entry in majorization argument"));
    }
    Ok(())
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

fn sorted_asc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

fn prefix_sums(v: &[f64]) -> Vec<f64> {
    v.iter()
        .scan(0.0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// Tests `x ≺_log y`: every partial product of the `k` largest entries of `x`
/// is at most that of `y`, and the full products agree. Margins are
/// differences of log-sums.
pub fn log_majorizes(y: &[f64], x: &[f64], tol: f64) -> Result<MajorizationVerdict> {
    check_pair(y, x)?;
    if let Some(bad) = x.iter().chain(y).find(|v| !(**v > 0.0)) {
        return Err(Error::Domain(format!(
            "log-majorization needs positive entries, got {bad}"
        )));
    }
    let lx: Vec<f64> = sorted_desc(x).iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = sorted_desc(y).iter().map(|v| v.ln()).collect();
    let px = prefix_sums(&lx);
    let py = prefix_sums(&ly);
    let m = px.len();
    let margins = (0..m).map(|k| {
        let slack = py[k] - px[k];
        if k + 1 == m {
            -slack.abs()
        } else {
            slack
        }
    });
    Ok(MajorizationVerdict::from_margins(margins, tol))
}

/// Tests `x ≺_w y`: `Σ_{j≤k} x_j↓ ≤ Σ_{j≤k} y_j↓` for every `k`.
pub fn weakly_majorizes(y: &[f64], x: &[f64], tol: f64) -> Result<MajorizationVerdict> {
    check_pair(y, x)?;
    let px = prefix_sums(&sorted_desc(x));
    let py = prefix_sums(&sorted_desc(y));
    Ok(MajorizationVerdict::from_margins(
        py.iter().zip(&px).map(|(b, a)| b - a),
        tol,
    ))
}

/// Tests `x ≺^w y`: `Σ_{j≤k} x_j↑ ≥ Σ_{j≤k} y_j↑` for every `k`.
pub fn supermajorizes(y: &[f64], x: &[f64], tol: f64) -> Result<MajorizationVerdict> {
    check_pair(y, x)?;
    let px = prefix_sums(&sorted_asc(x));
    let py = prefix_sums(&sorted_asc(y));
    Ok(MajorizationVerdict::from_margins(
        px.iter().zip(&py).map(|(a, b)| a - b),
        tol,
    ))
}

/// `false` exactly when `x ≺_log y` holds but `x ≺_w y` does not.
pub fn logmaj_implies_weakmaj_check(x: &[f64], y: &[f64]) -> Result<bool> {
    let tol = DEFAULT_MAJORIZATION_TOL;
    if !log_majorizes(y, x, tol)?.holds {
        return Ok(true);
    }
    let scale = y.iter().chain(x).fold(1.0_f64, |m, v| m.max(v.abs()));
    Ok(weakly_majorizes(y, x, tol * scale * x.len() as f64)?.holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const T: f64 = DEFAULT_MAJORIZATION_TOL;

    #[test]
    fn log_examples() {
        let v = log_majorizes(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0], T).unwrap();
        assert!(v.holds);
        assert_eq!(v.worst_margin, 0.0);

        assert!(log_majorizes(&[3.0, 2.0 / 3.0], &[2.0, 1.0], T).unwrap().holds);

        let v = log_majorizes(&[2.0, 2.0], &[1.0, 1.0], T).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_index, Some(2));

        assert!(matches!(
            log_majorizes(&[1.0, 0.0], &[1.0, 1.0], T),
            Err(Error::Domain(_))
        ));
        assert!(log_majorizes(&[1.0], &[1.0, 1.0], T).is_err());
    }

    #[test]
    fn weak_examples() {
        assert!(weakly_majorizes(&[1.0, 5.0], &[1.0, 5.0], T).unwrap().holds);
        assert!(weakly_majorizes(&[2.0, 0.0], &[1.0, 1.0], T).unwrap().holds);
        let v = weakly_majorizes(&[2.0, 2.0], &[3.0, 0.0], T).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_index, Some(1));
        assert_eq!(v.worst_margin, -1.0);
        assert!(weakly_majorizes(&[f64::NAN], &[1.0], T).is_err());
    }

    #[test]
    fn super_examples() {
        assert!(supermajorizes(&[1.0, 3.0], &[1.0, 3.0], T).unwrap().holds);
        assert!(supermajorizes(&[1.0, 3.0], &[2.0, 2.0], T).unwrap().holds);
        let v = supermajorizes(&[1.0, 3.0], &[0.0, 4.0], T).unwrap();
        assert!(!v.holds);
        assert_eq!(v.failing_index, Some(1));
    }

    #[test]
    fn implication_examples() {
        assert!(logmaj_implies_weakmaj_check(&[2.0, 1.0], &[3.0, 2.0 / 3.0]).unwrap());
        assert!(weakly_majorizes(&[3.0, 2.0 / 3.0], &[2.0, 1.0], T).unwrap().holds);
        assert!(logmaj_implies_weakmaj_check(&[1.5, 4.0], &[1.5, 4.0]).unwrap());
    }

    fn positive_vec() -> impl Strategy<Value = Vec<f64>> {
        (1usize..7).prop_flat_map(|m| proptest::collection::vec(0.05f64..20.0, m))
    }

    proptest! {
        #[test]
        fn reflexive_and_permutation_invariant(x in positive_vec(), rot in 0usize..7) {
            let mut y = x.clone();
            let len = y.len();
            y.rotate_left(rot % len);
            prop_assert!(log_majorizes(&y, &x, T).unwrap().holds);
            prop_assert!(weakly_majorizes(&y, &x, T).unwrap().holds);
            prop_assert!(supermajorizes(&y, &x, T).unwrap().holds);
        }

        #[test]
        fn scale_and_shift_covariance(
            (x, y) in (1usize..6).prop_flat_map(|m| (
                proptest::collection::vec(0.05f64..20.0, m),
                proptest::collection::vec(0.05f64..20.0, m),
            )),
            c in 0.1f64..10.0,
        ) {
            let cx: Vec<f64> = x.iter().map(|v| v * c).collect();
            let cy: Vec<f64> = y.iter().map(|v| v * c).collect();
            let a = log_majorizes(&y, &x, T).unwrap();
            let b = log_majorizes(&cy, &cx, T).unwrap();
            prop_assert!((a.worst_margin - b.worst_margin).abs() < 1e-9);

            let sx: Vec<f64> = x.iter().map(|v| v + c).collect();
            let sy: Vec<f64> = y.iter().map(|v| v + c).collect();
            let w0 = weakly_majorizes(&y, &x, T).unwrap().worst_margin;
            let w1 = weakly_majorizes(&sy, &sx, T).unwrap().worst_margin;
            prop_assert!((w0 - w1).abs() < 1e-9);
            let s0 = supermajorizes(&y, &x, T).unwrap().worst_margin;
            let s1 = supermajorizes(&sy, &sx, T).unwrap().worst_margin;
            prop_assert!((s0 - s1).abs() < 1e-9);
        }

        #[test]
        fn log_majorization_implies_weak(x in positive_vec(), t in 0.0f64..1.0) {
            // y is x pushed apart multiplicatively, so x ≺_log y by construction.
            let mut y = x.clone();
            y.sort_by(|a, b| b.total_cmp(a));
            let f = (1.0 + 3.0 * t).ln();
            let last = y.len() - 1;
            y[0] *= f.exp();
            y[last] /= f.exp();
            prop_assert!(log_majorizes(&y, &x, T).unwrap().holds || last == 0);
            prop_assert!(logmaj_implies_weakmaj_check(&x, &y).unwrap());
        }
    }
}
