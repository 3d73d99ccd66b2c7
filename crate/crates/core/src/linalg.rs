//! Dense integer matrices, Smith normal form, and finitely generated abelian
//! group presentations.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics on ragged input.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j].into())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        self.data
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(<[BigInt]>::to_vec)
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * k;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += k * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * k;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        IntMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &rhs[(k, j)]).sum()
        })
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.iter().map(BigInt::to_string).collect())
            .collect();
        rows.serialize(s)
    }
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.d.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form by least-absolute-value pivoting.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = smallest_nonzero(&a, t) {
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&pivot);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&pivot);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // pivot row/col are clear; enforce divisibility on the remainder
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, d: a, v }
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// `Z^free_rank + Z/d_1 + ... + Z/d_t` with `2 <= d_1 | d_2 | ... | d_t`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroupPresentation {
    torsion: Vec<BigInt>,
    free_rank: usize,
}

impl AbelianGroupPresentation {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            torsion: Vec::new(),
            free_rank: rank,
        }
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        Self::from_diagonal(std::iter::once(order.into()), 0)
    }

    /// Builds from arbitrary diagonal entries (a relation matrix in diagonal
    /// form) plus extra free generators. Entries `0` become free summands,
    /// units vanish; the rest is normalized into an invariant-factor chain.
    pub fn from_diagonal(entries: impl IntoIterator<Item = BigInt>, extra_free: usize) -> Self {
        let mut free_rank = extra_free;
        let mut torsion: Vec<BigInt> = Vec::new();
        for d in entries {
            let d = d.abs();
            if d.is_zero() {
                free_rank += 1;
            } else if !d.is_one() {
                torsion.push(d);
            }
        }
        Self {
            torsion: normalize_chain(torsion),
            free_rank,
        }
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_diagonal(
            self.torsion.iter().chain(other.torsion.iter()).cloned(),
            self.free_rank + other.free_rank,
        )
    }
}

/// Turns any list of orders `>= 2` into the invariant-factor chain of the
/// same group. `Z/a + Z/b = Z/gcd + Z/lcm`, and one sweep over all pairs
/// `i < j` leaves each entry dividing every later one.
fn normalize_chain(mut xs: Vec<BigInt>) -> Vec<BigInt> {
    let n = xs.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = xs[i].gcd(&xs[j]);
            let l = xs[i].lcm(&xs[j]);
            xs[i] = g;
            xs[j] = l;
        }
    }
    xs.retain(|d| !d.is_one());
    xs
}

impl fmt::Display for AbelianGroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl Serialize for AbelianGroupPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AbelianGroup", 3)?;
        st.serialize_field("display", &self.to_string())?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(BigInt::to_string).collect();
        st.serialize_field("torsion", &torsion)?;
        st.end()
    }
}

/// `Z^rows / M Z^cols`.
pub fn cokernel(m: &IntMatrix) -> AbelianGroupPresentation {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    AbelianGroupPresentation::from_diagonal(
        snf.d.diagonal().into_iter().filter(|d| !d.is_zero()),
        m.rows() - rank,
    )
}

pub fn kernel_rank(m: &IntMatrix) -> usize {
    m.cols() - smith_normal_form(m).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(&(&s.u * m) * &s.v, s.d);
        assert!(s.d.is_diagonal());
        s
    }

    #[test]
    fn snf_examples() {
        let s = check(&mat(&[&[0, -1], &[-1, 1]]));
        assert_eq!(s.d, mat(&[&[1, 0], &[0, 1]]));
        let s = check(&mat(&[&[1, -1], &[-1, 1]]));
        assert_eq!(s.d, mat(&[&[1, 0], &[0, 0]]));
        let s = check(&IntMatrix::zeros(2, 2));
        assert!(s.d.is_zero());
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_divisibility_fixup() {
        // diag(2, 3) is not in Smith form; it must become diag(1, 6)
        let s = check(&mat(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.d.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        let s = check(&mat(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]));
        assert_eq!(
            s.d.diagonal(),
            vec![BigInt::from(2), BigInt::from(2), BigInt::from(60)]
        );
    }

    #[test]
    fn snf_rectangular() {
        let s = check(&mat(&[&[2, 4, 6]]));
        assert_eq!(s.d, mat(&[&[2, 0, 0]]));
        let s = check(&mat(&[&[3], &[6], &[9]]));
        assert_eq!(s.d.diagonal(), vec![BigInt::from(3)]);
        check(&IntMatrix::zeros(0, 3));
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel(&mat(&[&[-1]])).is_trivial());
        assert_eq!(kernel_rank(&mat(&[&[-1]])), 0);
        assert_eq!(
            cokernel(&mat(&[&[-2]])),
            AbelianGroupPresentation::cyclic(2)
        );
        assert_eq!(kernel_rank(&mat(&[&[-2]])), 0);
        let m = mat(&[&[1, -1], &[-1, 1]]);
        assert_eq!(cokernel(&m), AbelianGroupPresentation::free(1));
        assert_eq!(kernel_rank(&m), 1);
    }

    #[test]
    fn group_display() {
        let g = AbelianGroupPresentation::from_diagonal([2, 6].map(BigInt::from), 2);
        assert_eq!(g.to_string(), "Z^2 + Z/2 + Z/6");
        assert_eq!(AbelianGroupPresentation::trivial().to_string(), "0");
        assert_eq!(AbelianGroupPresentation::cyclic(1).to_string(), "0");
        assert_eq!(AbelianGroupPresentation::free(1).to_string(), "Z");
        // Z/4 + Z/6 = Z/2 + Z/12
        let g = AbelianGroupPresentation::from_diagonal([4, 6].map(BigInt::from), 0);
        assert_eq!(g.to_string(), "Z/2 + Z/12");
    }
}
