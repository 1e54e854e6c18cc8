//! Exhaustive reference solutions for tiny Box-LASSO instances.

use nalgebra::{DMatrix, DVector};

use super::BoxLassoProblem;
use crate::error::{Error, Result};

const MAX_DIM: usize = 6;

/// Half-width used in place of an infinite box edge.
const GRID_CLIP: f64 = 3.0;

fn check_size(prob: &BoxLassoProblem) -> Result<usize> {
    let n = prob.dim();
    if n > MAX_DIM {
        return Err(Error::OracleTooLarge(n));
    }
    Ok(n)
}

/// Best point of a uniform `grid_points^n` grid over the box, with infinite
/// edges clipped to `[-3, 3]`. Accurate to O(grid spacing).
pub fn brute_force_oracle(prob: &BoxLassoProblem, grid_points: usize) -> Result<DVector<f64>> {
    let n = check_size(prob)?;
    if grid_points < 2 {
        return Err(Error::invalid("grid_points", grid_points as f64, "must be at least 2"));
    }
    let lo = prob.bounds.lower().max(-GRID_CLIP);
    let hi = prob.bounds.upper().min(GRID_CLIP);
    let spacing = (hi - lo) / (grid_points - 1) as f64;
    let axis: Vec<f64> = (0..grid_points).map(|i| lo + spacing * i as f64).collect();

    let mut index = vec![0usize; n];
    let mut point = DVector::from_element(n, axis[0]);
    let mut best = point.clone();
    let mut best_value = prob.objective(&point);
    loop {
        // Odometer increment over the grid.
        let mut j = 0;
        while j < n {
            index[j] += 1;
            if index[j] < grid_points {
                point[j] = axis[index[j]];
                break;
            }
            index[j] = 0;
            point[j] = axis[0];
            j += 1;
        }
        if j == n {
            return Ok(best);
        }
        let value = prob.objective(&point);
        if value < best_value {
            best_value = value;
            best.copy_from(&point);
        }
    }
}

/// Where one coordinate sits relative to the kinks of the penalty and box.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Region {
    Lower,
    Negative,
    Zero,
    Positive,
    Upper,
}

/// Exact minimizer found by enumerating every assignment of coordinates to
/// {lower edge, free negative, zero, free positive, upper edge}. Each
/// assignment fixes the sign pattern, leaving an unconstrained quadratic in
/// the free coordinates; the optimum is the best feasible stationary point.
pub fn exhaustive_pattern_oracle(prob: &BoxLassoProblem) -> Result<(DVector<f64>, f64)> {
    let n = check_size(prob)?;
    let (l, u) = (prob.bounds.lower(), prob.bounds.upper());
    let mut regions = vec![Region::Zero];
    if l < 0.0 {
        regions.push(Region::Negative);
        if l.is_finite() {
            regions.push(Region::Lower);
        }
    }
    if u > 0.0 {
        regions.push(Region::Positive);
        if u.is_finite() {
            regions.push(Region::Upper);
        }
    }

    let a = &prob.design;
    let mut best = DVector::zeros(n);
    let mut best_value = prob.objective(&best);
    let patterns = regions.len().pow(n as u32);
    let mut pattern = vec![Region::Zero; n];
    for code in 0..patterns {
        let mut c = code;
        for slot in pattern.iter_mut() {
            *slot = regions[c % regions.len()];
            c /= regions.len();
        }
        let free: Vec<usize> = (0..n)
            .filter(|&j| matches!(pattern[j], Region::Negative | Region::Positive))
            .collect();
        let mut s = DVector::from_fn(n, |j, _| match pattern[j] {
            Region::Lower => l,
            Region::Upper => u,
            _ => 0.0,
        });
        if !free.is_empty() {
            let af = DMatrix::from_fn(a.nrows(), free.len(), |i, k| a[(i, free[k])]);
            let target = &prob.observation - a * &s;
            let signs = DVector::from_fn(free.len(), |k, _| {
                if pattern[free[k]] == Region::Positive {
                    1.0
                } else {
                    -1.0
                }
            });
            let gram = af.tr_mul(&af) * 2.0;
            let rhs = af.tr_mul(&target) * 2.0 - signs * prob.gamma_scaled;
            let Some(sf) = gram.lu().solve(&rhs) else {
                continue;
            };
            for (k, &j) in free.iter().enumerate() {
                s[j] = sf[k];
            }
        }
        if !s.iter().all(|&x| prob.bounds.contains(x)) {
            continue;
        }
        let value = prob.objective(&s);
        if value < best_value {
            best_value = value;
            best = s;
        }
    }
    Ok((best, best_value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shrinkage::{saturated_shrinkage, BoxBounds};
    use crate::solver::solve_box_lasso;
    use crate::solver::tests::random_problem;

    fn scalar(a: f64, r: f64, gamma_scaled: f64, bounds: BoxBounds) -> BoxLassoProblem {
        BoxLassoProblem::new(
            DMatrix::from_element(1, 1, a),
            DVector::from_element(1, r),
            gamma_scaled,
            bounds,
        )
        .unwrap()
    }

    #[test]
    fn scalar_saturates() {
        let prob = scalar(1.0, 2.0, 1.0, BoxBounds::unit());
        let grid = brute_force_oracle(&prob, 1001).unwrap();
        assert!((grid[0] - 1.0).abs() < 1e-12);
        // ||s - 2||^2 + |s| is minimized by shrinking 2 by 1/2 then clipping.
        assert_eq!(saturated_shrinkage(2.0, 0.5, BoxBounds::unit()), 1.0);
        let (exact, _) = exhaustive_pattern_oracle(&prob).unwrap();
        assert_eq!(exact[0], 1.0);
    }

    #[test]
    fn zero_observation() {
        let prob = scalar(1.0, 0.0, 1.0, BoxBounds::symmetric(1.0).unwrap());
        assert_eq!(brute_force_oracle(&prob, 101).unwrap()[0], 0.0);
    }

    #[test]
    fn grid_oracle_agrees_with_solver() {
        let grid_points = 161;
        let prob = random_problem(6, 3, 0.2, BoxBounds::unit(), 21);
        let spacing = 1.0 / (grid_points - 1) as f64;
        let grid = brute_force_oracle(&prob, grid_points).unwrap();
        let rep = solve_box_lasso(&prob, 1e-12, 100_000).unwrap();
        for j in 0..3 {
            assert!((grid[j] - rep.solution[j]).abs() <= 2.0 * spacing, "coordinate {j}");
        }
    }

    #[test]
    fn exhaustive_oracle_beats_grid() {
        let prob = random_problem(5, 3, 0.1, BoxBounds::new(-0.5, 1.5).unwrap(), 22);
        let grid = brute_force_oracle(&prob, 201).unwrap();
        let (_, exact) = exhaustive_pattern_oracle(&prob).unwrap();
        assert!(exact <= prob.objective(&grid));
    }

    #[test]
    fn rejects_large_instances() {
        let prob = random_problem(8, 7, 0.1, BoxBounds::unit(), 23);
        assert!(matches!(brute_force_oracle(&prob, 3), Err(Error::OracleTooLarge(7))));
    }
}
