use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 10_000;
const CONVERGENCE_TOL: f64 = 1e-10;

/// Demean a set of columns over one or two factors by alternating
/// projections, iterating until the largest absolute cell change in a full
/// sweep falls below 1e-10. Returns the number of sweeps performed.
///
/// A single factor is demeaned exactly in the first sweep; a balanced
/// two-factor panel converges by the second sweep; unbalanced panels take
/// more. Singleton groups demean to exactly zero and stay there.
pub fn within_transform(columns: &mut [Vec<f64>], factors: &[(Vec<u32>, usize)]) -> Result<usize> {
    if factors.len() > 2 {
        return Err(Error::data("at most two fixed-effect factors are supported"));
    }
    if factors.is_empty() || columns.is_empty() {
        return Ok(0);
    }
    let n = columns[0].len();
    for (codes, _) in factors {
        if codes.len() != n {
            return Err(Error::data("factor length does not match column length"));
        }
    }
    let mut sums: Vec<Vec<f64>> = factors.iter().map(|(_, g)| vec![0.0; *g]).collect();
    let mut counts: Vec<Vec<f64>> = factors
        .iter()
        .map(|(codes, g)| {
            let mut c = vec![0.0; *g];
            for &code in codes {
                c[code as usize] += 1.0;
            }
            c
        })
        .collect();
    for c in counts.iter_mut().flatten() {
        if *c == 0.0 {
            *c = 1.0;
        }
    }

    for sweep in 1..=MAX_SWEEPS {
        let mut max_change = 0.0f64;
        for (f, (codes, _)) in factors.iter().enumerate() {
            for column in columns.iter_mut() {
                let sums = &mut sums[f];
                sums.iter_mut().for_each(|s| *s = 0.0);
                for (&code, v) in codes.iter().zip(column.iter()) {
                    sums[code as usize] += *v;
                }
                for (s, c) in sums.iter_mut().zip(&counts[f]) {
                    *s /= *c;
                }
                for (&code, v) in codes.iter().zip(column.iter_mut()) {
                    let mean = sums[code as usize];
                    *v -= mean;
                    max_change = max_change.max(mean.abs());
                }
            }
        }
        if max_change < CONVERGENCE_TOL {
            return Ok(sweep);
        }
    }
    Err(Error::numeric(format!(
        "within transformation did not converge in {MAX_SWEEPS} sweeps"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group_means(codes: &[u32], g: usize, col: &[f64]) -> Vec<f64> {
        let mut sums = vec![0.0; g];
        let mut counts = vec![0.0; g];
        for (&c, v) in codes.iter().zip(col) {
            sums[c as usize] += v;
            counts[c as usize] += 1.0;
        }
        sums.iter().zip(&counts).map(|(s, c): (&f64, &f64)| s / c.max(1.0)).collect()
    }

    #[test]
    fn single_factor_exact_demeaning() {
        let codes = vec![0u32, 0, 1, 1, 1];
        let mut cols = vec![vec![1.0, 3.0, 10.0, 20.0, 30.0]];
        within_transform(&mut cols, &[(codes.clone(), 2)]).unwrap();
        assert_eq!(cols[0], vec![-1.0, 1.0, -10.0, 0.0, 10.0]);
        for m in group_means(&codes, 2, &cols[0]) {
            assert!(m.abs() < 1e-12);
        }
    }

    #[test]
    fn balanced_two_factor_converges_in_two_sweeps() {
        // 3 x 3 balanced panel.
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut y = Vec::new();
        for i in 0..3u32 {
            for j in 0..3u32 {
                a.push(i);
                b.push(j);
                y.push(2.0 * i as f64 - 3.0 * j as f64 + (i * 3 + j) as f64 * 0.1);
            }
        }
        let mut cols = vec![y];
        let sweeps = within_transform(&mut cols, &[(a.clone(), 3), (b.clone(), 3)]).unwrap();
        assert!(sweeps <= 2, "took {sweeps} sweeps");
        for m in group_means(&a, 3, &cols[0]) {
            assert!(m.abs() < 1e-10);
        }
        for m in group_means(&b, 3, &cols[0]) {
            assert!(m.abs() < 1e-10);
        }
    }

    #[test]
    fn unbalanced_two_factor_fully_demeans() {
        let a = vec![0u32, 0, 0, 1, 1, 2, 2, 2, 2, 1];
        let b = vec![0u32, 1, 2, 0, 2, 1, 2, 0, 1, 1];
        let mut cols = vec![vec![5.0, -1.0, 2.5, 7.0, 0.0, 3.0, -2.0, 4.0, 8.0, 1.0]];
        within_transform(&mut cols, &[(a.clone(), 3), (b.clone(), 3)]).unwrap();
        for m in group_means(&a, 3, &cols[0]) {
            assert!(m.abs() < 1e-9);
        }
        for m in group_means(&b, 3, &cols[0]) {
            assert!(m.abs() < 1e-9);
        }
    }

    #[test]
    fn three_factors_rejected() {
        let mut cols = vec![vec![1.0]];
        let f = (vec![0u32], 1);
        assert!(within_transform(&mut cols, &[f.clone(), f.clone(), f]).is_err());
    }
}
