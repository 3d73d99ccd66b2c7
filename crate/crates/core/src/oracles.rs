//! Independent numeric and brute-force verifiers.
//!
//! Nothing here calls into the exact decision procedures; the oracles work
//! from the raw edge list, floating-point angles, or plain integer matrices.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::graph::LabeledGraph;
use crate::linalg::IntMatrix;
use crate::subshift::Word;

pub const ORBIT_STEP_CAP: usize = 1_000_000;
pub const WEYL_N_CAP: u32 = 10_000;
pub const WEYL_L_CAP: u32 = 1_000;
pub const MATRIX_WORD_CAP: usize = 12;

/// `(sqrt(5) - 1) / 2` to 15 digits.
pub const GOLDEN_DEFAULT: f64 = 0.618033988749894;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("{what} {requested} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: u64,
        cap: u64,
    },
    #[error("need one angle per symbol: {expected} symbols, {got} angles")]
    AngleCount { expected: usize, got: usize },
    #[error("start vertex {0} out of range")]
    StartVertex(usize),
    #[error("epsilon must lie in (0, 1), got {0}")]
    Epsilon(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberSample {
    pub vertex: String,
    pub points: Vec<f64>,
    /// Largest distance from a grid point `j * eps` to the nearest visited
    /// point; `None` when the fiber was never reached.
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitSample {
    pub steps: usize,
    pub epsilon: f64,
    pub fibers: Vec<FiberSample>,
    pub all_dense: bool,
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn wrap(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Breadth-first expansion of the orbit of `(start_vertex, start_point)`
/// under the edge rotations. Each BFS level is deduplicated per fiber on a
/// grid of width `eps / 4`; at most `steps` points are generated.
pub fn orbit_density(
    g: &LabeledGraph,
    theta: &[f64],
    start_vertex: usize,
    start_point: f64,
    steps: usize,
    eps: f64,
) -> Result<OrbitSample, OracleError> {
    if steps > ORBIT_STEP_CAP {
        return Err(OracleError::CapExceeded {
            what: "orbit steps",
            requested: steps as u64,
            cap: ORBIT_STEP_CAP as u64,
        });
    }
    if theta.len() != g.symbol_count() {
        return Err(OracleError::AngleCount {
            expected: g.symbol_count(),
            got: theta.len(),
        });
    }
    if start_vertex >= g.vertex_count() {
        return Err(OracleError::StartVertex(start_vertex));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(OracleError::Epsilon(eps));
    }
    let n = g.vertex_count();
    let cell_width = eps / 4.0;
    let cells = (1.0 / cell_width).ceil() as u64;
    let cell_of = |x: f64| ((x / cell_width) as u64).min(cells - 1);

    let mut visited: Vec<BTreeMap<u64, f64>> = vec![BTreeMap::new(); n];
    let start = wrap(start_point);
    visited[start_vertex].insert(cell_of(start), start);
    let mut frontier: Vec<(usize, f64)> = vec![(start_vertex, start)];
    let mut generated = 1usize;

    'outer: while !frontier.is_empty() && generated < steps {
        let mut level: BTreeMap<(usize, u64), f64> = BTreeMap::new();
        for &(v, x) in &frontier {
            for e in g.out_edges(v) {
                if generated >= steps {
                    break 'outer;
                }
                let y = wrap(x + theta[e.label]);
                generated += 1;
                let c = cell_of(y);
                level.entry((e.target, c)).or_insert(y);
                visited[e.target].entry(c).or_insert(y);
            }
        }
        let next: Vec<(usize, f64)> = level.into_iter().map(|((v, _), x)| (v, x)).collect();
        if next == frontier {
            break;
        }
        frontier = next;
    }

    let grid = (1.0 / eps).ceil() as usize;
    let fibers: Vec<FiberSample> = (0..n)
        .map(|v| {
            let mut points: Vec<f64> = visited[v].values().copied().collect();
            points.sort_by(f64::total_cmp);
            let gap = (!points.is_empty()).then(|| {
                (0..grid)
                    .map(|j| {
                        let p = j as f64 * eps;
                        points
                            .iter()
                            .map(|&x| circle_distance(x, p))
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0, f64::max)
            });
            FiberSample {
                vertex: g.vertex_name(v).to_string(),
                points,
                gap,
            }
        })
        .collect();
    let all_dense = fibers.iter().all(|f| f.gap.is_some_and(|gap| gap < eps));
    Ok(OrbitSample {
        steps: generated,
        epsilon: eps,
        fibers,
        all_dense,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeylRow {
    pub ell: u32,
    pub value: f64,
}

/// `|(1/N^n) sum_{i_1..i_n} e^{2 pi i ell (theta_{i_1} + ... + theta_{i_n})}|`
/// for `ell = 1..=ell_max`, via the product `|(1/N) sum_k e^{2 pi i ell theta_k}|^n`.
pub fn weyl_sums(theta: &[f64], n: u32, ell_max: u32) -> Result<Vec<WeylRow>, OracleError> {
    if n > WEYL_N_CAP {
        return Err(OracleError::CapExceeded {
            what: "Weyl power n",
            requested: n.into(),
            cap: WEYL_N_CAP.into(),
        });
    }
    if ell_max > WEYL_L_CAP {
        return Err(OracleError::CapExceeded {
            what: "Weyl frequency",
            requested: ell_max.into(),
            cap: WEYL_L_CAP.into(),
        });
    }
    let count = theta.len() as f64;
    Ok((1..=ell_max)
        .map(|ell| {
            let (re, im) = theta.iter().fold((0.0, 0.0), |(re, im), &t| {
                // reduce ell * t mod 1 before the trig call
                let phase = 2.0 * std::f64::consts::PI * (f64::from(ell) * t).rem_euclid(1.0);
                (re + phase.cos(), im + phase.sin())
            });
            let modulus = (re * re + im * im).sqrt() / count;
            WeylRow {
                ell,
                value: modulus.min(1.0).powi(n as i32),
            }
        })
        .collect())
}

/// `M_{w_1} ... M_{w_k} != 0`, computed with path counts over the raw edges.
pub fn admissibility_matrix_oracle(g: &LabeledGraph, w: &Word) -> Result<bool, OracleError> {
    if w.len() > MATRIX_WORD_CAP {
        return Err(OracleError::CapExceeded {
            what: "word length",
            requested: w.len() as u64,
            cap: MATRIX_WORD_CAP as u64,
        });
    }
    let n = g.vertex_count();
    let matrix = |a: usize| {
        let mut m = vec![vec![0u128; n]; n];
        for e in g.edges() {
            if e.label == a {
                m[e.source][e.target] = 1;
            }
        }
        m
    };
    let mut prod: Vec<Vec<u128>> = (0..n)
        .map(|i| (0..n).map(|j| u128::from(i == j)).collect())
        .collect();
    for &a in w.symbols() {
        let m = matrix(a);
        let mut next = vec![vec![0u128; n]; n];
        for i in 0..n {
            for k in 0..n {
                if prod[i][k] == 0 {
                    continue;
                }
                for j in 0..n {
                    next[i][j] = next[i][j].saturating_add(prod[i][k].saturating_mul(m[k][j]));
                }
            }
        }
        prod = next;
    }
    Ok(prod.iter().flatten().any(|&x| x != 0))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Checks `U M V = D`, diagonality, the divisibility chain, nonnegative
/// diagonal, and `det U, det V` in `{1, -1}`.
pub fn snf_certify(m: &IntMatrix, u: &IntMatrix, d: &IntMatrix, v: &IntMatrix) -> bool {
    let dims_ok = u.is_square()
        && v.is_square()
        && u.rows() == m.rows()
        && v.rows() == m.cols()
        && d.rows() == m.rows()
        && d.cols() == m.cols();
    if !dims_ok {
        return false;
    }
    if &(u * m) * v != *d || !d.is_diagonal() {
        return false;
    }
    let diag = d.diagonal();
    if diag.iter().any(Signed::is_negative) {
        return false;
    }
    let chain_ok = diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        }
    });
    chain_ok && determinant(u).abs().is_one() && determinant(v).abs().is_one()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors from determinantal divisors: `d_1 ... d_k` is the gcd
/// of all `k x k` minors. Returns the nonzero factors and the rank.
/// Exponential in the dimension; intended for matrices up to about 8 x 8.
pub fn invariant_factors_by_minors(m: &IntMatrix) -> (Vec<BigInt>, usize) {
    let mut factors = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rows in combinations(m.rows(), k) {
            for cols in combinations(m.cols(), k) {
                let minor = IntMatrix::from_fn(k, k, |i, j| m[(rows[i], cols[j])].clone());
                g = g.gcd(&determinant(&minor));
            }
        }
        if g.is_zero() {
            return (factors, k - 1);
        }
        factors.push(&g / &prev);
        prev = g;
    }
    let rank = factors.len();
    (factors, rank)
}

/// Distinct label words of length `len` readable from `v`, by plain path
/// enumeration with `(word, endpoint)` deduplication.
pub fn label_words_from(g: &LabeledGraph, v: usize, len: usize) -> BTreeSet<Vec<usize>> {
    let mut frontier: BTreeSet<(Vec<usize>, usize)> = BTreeSet::from([(Vec::new(), v)]);
    for _ in 0..len {
        let mut next = BTreeSet::new();
        for (w, u) in &frontier {
            for e in g.edges().iter().filter(|e| e.source == *u) {
                let mut w2 = w.clone();
                w2.push(e.label);
                next.insert((w2, e.target));
            }
        }
        frontier = next;
    }
    frontier.into_iter().map(|(w, _)| w).collect()
}

/// Simple cycles as edge-index lists, each reported once starting from its
/// lowest vertex. Exponential; for small graphs only.
pub fn simple_cycles(g: &LabeledGraph) -> Vec<Vec<usize>> {
    fn dfs(
        g: &LabeledGraph,
        root: usize,
        u: usize,
        on_path: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        for (k, e) in g.edges().iter().enumerate() {
            if e.source != u || e.target < root {
                continue;
            }
            if e.target == root {
                let mut c = path.clone();
                c.push(k);
                out.push(c);
            } else if !on_path[e.target] {
                on_path[e.target] = true;
                path.push(k);
                dfs(g, root, e.target, on_path, path, out);
                path.pop();
                on_path[e.target] = false;
            }
        }
    }
    let mut out = Vec::new();
    for root in 0..g.vertex_count() {
        let mut on_path = vec![false; g.vertex_count()];
        on_path[root] = true;
        dfs(g, root, root, &mut on_path, &mut Vec::new(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::smith_normal_form;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn irrational_orbit_is_dense() {
        let g = catalog::n_loop(2);
        let s = orbit_density(&g, &[0.0, 0.6180339887], 0, 0.0, 100_000, 0.05).unwrap();
        assert!(s.all_dense);
        assert!(s.fibers[0].gap.unwrap() < 0.05);
    }

    #[test]
    fn rational_orbit_is_finite() {
        let g = catalog::n_loop(2);
        let s = orbit_density(&g, &[0.0, 0.5], 0, 0.0, 100_000, 0.05).unwrap();
        assert_eq!(s.fibers[0].points, vec![0.0, 0.5]);
        assert!(!s.all_dense);
    }

    #[test]
    fn unreachable_fiber_is_empty() {
        let g = catalog::two_component();
        let s = orbit_density(&g, &[0.1, 0.2, 0.3], 1, 0.0, 1_000, 0.05).unwrap();
        assert!(s.fibers[0].points.is_empty());
        assert_eq!(s.fibers[0].gap, None);
        assert!(!s.all_dense);
        assert!(orbit_density(&g, &[0.1, 0.2, 0.3], 0, 0.0, 2_000_000, 0.05).is_err());
    }

    #[test]
    fn weyl_examples() {
        let rows = weyl_sums(&[0.0, 0.5], 7, 2).unwrap();
        assert!((rows[1].value - 1.0).abs() < 1e-12);
        let rows = weyl_sums(&[0.0, 0.5], 10, 1).unwrap();
        assert!(rows[0].value.abs() < 1e-12);
        // |cos(pi * theta)|^n for two angles 0, theta
        let rows = weyl_sums(&[0.0, 0.3], 5, 1).unwrap();
        assert!((rows[0].value - (std::f64::consts::PI * 0.3).cos().abs().powi(5)).abs() < 1e-12);
    }

    #[test]
    fn matrix_admissibility() {
        let g = catalog::golden_mean();
        assert!(admissibility_matrix_oracle(&g, &Word::empty()).unwrap());
        assert!(!admissibility_matrix_oracle(&g, &Word(vec![1, 1])).unwrap());
        let full = catalog::n_loop(3);
        assert!(admissibility_matrix_oracle(&full, &Word(vec![0, 2, 1, 1])).unwrap());
    }

    #[test]
    fn determinant_values() {
        assert_eq!(determinant(&mat(&[&[0, -1], &[-1, 1]])), BigInt::from(-1));
        assert_eq!(
            determinant(&mat(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]])),
            BigInt::from(0)
        );
        assert_eq!(determinant(&mat(&[&[0, 2], &[3, 0]])), BigInt::from(-6));
        assert_eq!(
            determinant(&mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])),
            BigInt::from(-3)
        );
    }

    #[test]
    fn certifies_snf_examples() {
        for m in [
            mat(&[&[0, -1], &[-1, 1]]),
            mat(&[&[1, -1], &[-1, 1]]),
            IntMatrix::zeros(2, 2),
        ] {
            let s = smith_normal_form(&m);
            assert!(snf_certify(&m, &s.u, &s.d, &s.v));
        }
        let m = mat(&[&[2, 0], &[0, 3]]);
        assert!(!snf_certify(
            &m,
            &IntMatrix::identity(2),
            &m,
            &IntMatrix::identity(2)
        ));
    }

    #[test]
    fn minors_route() {
        let (f, r) = invariant_factors_by_minors(&mat(&[&[2, 0], &[0, 3]]));
        assert_eq!((f, r), (vec![BigInt::from(1), BigInt::from(6)], 2));
        let (f, r) = invariant_factors_by_minors(&mat(&[&[1, -1], &[-1, 1]]));
        assert_eq!((f, r), (vec![BigInt::from(1)], 1));
    }

    #[test]
    fn cycles_and_words() {
        assert_eq!(simple_cycles(&catalog::golden_mean()).len(), 2);
        assert_eq!(simple_cycles(&catalog::n_loop(3)).len(), 3);
        assert_eq!(label_words_from(&catalog::golden_mean(), 1, 3).len(), 3);
    }
}
