//! Smith and Hermite normal forms over `Z` with explicit unimodular
//! transforms. Entries are `i128` with checked arithmetic: any overflow is
//! reported instead of silently wrapping.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("integer overflow in exact linear algebra")]
pub struct Overflow;

type Res<T> = Result<T, Overflow>;

fn add(a: i128, b: i128) -> Res<i128> {
    a.checked_add(b).ok_or(Overflow)
}

fn mul(a: i128, b: i128) -> Res<i128> {
    a.checked_mul(b).ok_or(Overflow)
}

fn sub_mul(a: i128, k: i128, b: i128) -> Res<i128> {
    a.checked_sub(mul(k, b)?).ok_or(Overflow)
}

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.concat() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i128> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn checked_mul(&self, rhs: &IntMatrix) -> Res<IntMatrix> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] = add(out[(i, j)], mul(a, rhs[(k, j)])?)?;
                }
            }
        }
        Ok(out)
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

    /// row[dst] -= k * row[src]
    fn row_sub(&mut self, dst: usize, k: i128, src: usize) -> Res<()> {
        for j in 0..self.cols {
            self[(dst, j)] = sub_mul(self[(dst, j)], k, self[(src, j)])?;
        }
        Ok(())
    }

    /// col[dst] -= k * col[src]
    fn col_sub(&mut self, dst: usize, k: i128, src: usize) -> Res<()> {
        for i in 0..self.rows {
            self[(i, dst)] = sub_mul(self[(i, dst)], k, self[(i, src)])?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// `left · M · right = diag`, with `left_inv`, `right_inv` the inverses of
/// the unimodular transforms, so `M = left_inv · diag · right_inv`.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
    pub right_inv: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    pub fn invariant_factors(&self) -> Vec<i128> {
        (0..self.rank).map(|i| self.diag[(i, i)]).collect()
    }
}

// Row ops act on (diag, left) and inversely on left_inv; column ops act on
// (diag, right) and inversely on right_inv.
struct Work {
    s: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    // row[dst] -= k row[src]; inverse: col[src] += k col[dst] on u_inv
    fn row_sub(&mut self, dst: usize, k: i128, src: usize) -> Res<()> {
        self.s.row_sub(dst, k, src)?;
        self.u.row_sub(dst, k, src)?;
        self.u_inv.col_sub(src, -k, dst)
    }

    // col[dst] -= k col[src]; inverse: row[src] += k row[dst] on v_inv
    fn col_sub(&mut self, dst: usize, k: i128, src: usize) -> Res<()> {
        self.s.col_sub(dst, k, src)?;
        self.v.col_sub(dst, k, src)?;
        self.v_inv.row_sub(src, -k, dst)
    }

    fn negate_row(&mut self, i: usize) {
        self.s.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Smith normal form: diagonal entries `d_1 | d_2 | ... | d_r`, all positive.
pub fn smith(m: &IntMatrix) -> Result<SmithDecomposition, Overflow> {
    let (r, c) = (m.rows, m.cols);
    let mut w = Work {
        s: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    };
    let mut t = 0;
    while t < r.min(c) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = w.s[(i, j)];
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < w.s[(bi, bj)].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let p = w.s[(t, t)];
            let mut clean = true;
            for i in t + 1..r {
                let x = w.s[(i, t)];
                if x != 0 {
                    w.row_sub(i, x.div_euclid(p), t)?;
                    clean &= w.s[(i, t)] == 0;
                }
            }
            for j in t + 1..c {
                let x = w.s[(t, j)];
                if x != 0 {
                    w.col_sub(j, x.div_euclid(p), t)?;
                    clean &= w.s[(t, j)] == 0;
                }
            }
            if !clean {
                // a smaller remainder sits in row t or column t
                let mut best = (t, t);
                for i in t + 1..r {
                    let x = w.s[(i, t)];
                    if x != 0 && x.abs() < w.s[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..c {
                    let x = w.s[(t, j)];
                    if x != 0 && x.abs() < w.s[best].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            let p = w.s[(t, t)];
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| w.s[(i, j)] % p != 0));
            match offender {
                Some(i) => w.row_sub(t, -1, i)?,
                None => break,
            }
        }
        if w.s[(t, t)] < 0 {
            w.negate_row(t);
        }
        t += 1;
    }
    Ok(SmithDecomposition { left: w.u, left_inv: w.u_inv, diag: w.s, right: w.v, right_inv: w.v_inv, rank: t })
}

/// A `Z`-basis of `{x : M x = 0}`, as vectors.
pub fn integer_kernel(m: &IntMatrix) -> Result<Vec<Vec<i128>>, Overflow> {
    let snf = smith(m)?;
    Ok((snf.rank..m.cols).map(|j| snf.right.column(j)).collect())
}

/// Row Hermite normal form of the lattice spanned by `vectors`: echelon
/// rows, positive pivots, entries above each pivot reduced into `[0, pivot)`.
/// Zero rows are dropped.
pub fn hermite_rows(vectors: &[Vec<i128>]) -> Result<Vec<Vec<i128>>, Overflow> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let mut a = IntMatrix::from_rows(vectors);
    let (r, c) = (a.rows, a.cols);
    let mut pr = 0;
    for col in 0..c {
        if pr == r {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pr..r {
                let x = a[(i, col)];
                if x != 0 && best.is_none_or(|b| x.abs() < a[(b, col)].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap_rows(pr, b);
            let p = a[(pr, col)];
            let mut done = true;
            for i in pr + 1..r {
                let x = a[(i, col)];
                if x != 0 {
                    a.row_sub(i, x.div_euclid(p), pr)?;
                    done &= a[(i, col)] == 0;
                }
            }
            if done {
                break;
            }
        }
        if a[(pr, col)] == 0 {
            continue;
        }
        if a[(pr, col)] < 0 {
            a.negate_row(pr);
        }
        let p = a[(pr, col)];
        for i in 0..pr {
            let q = a[(i, col)].div_euclid(p);
            if q != 0 {
                a.row_sub(i, q, pr)?;
            }
        }
        pr += 1;
    }
    Ok((0..pr).map(|i| a.row(i).to_vec()).collect())
}

/// Integer coordinates of `target` in a Hermite basis, if it lies in the lattice.
pub fn solve_in_hermite_basis(basis: &[Vec<i128>], target: &[i128]) -> Result<Option<Vec<i128>>, Overflow> {
    let mut rest = target.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for row in basis {
        let pc = row.iter().position(|&x| x != 0).expect("Hermite rows are nonzero");
        if rest[pc] % row[pc] != 0 {
            return Ok(None);
        }
        let k = rest[pc] / row[pc];
        for (x, &y) in rest.iter_mut().zip(row) {
            *x = sub_mul(*x, k, y)?;
        }
        coords.push(k);
    }
    Ok(rest.iter().all(|&x| x == 0).then_some(coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(m: &IntMatrix) {
        let d = smith(m).unwrap();
        let back = d.left_inv.checked_mul(&d.diag).unwrap().checked_mul(&d.right_inv).unwrap();
        assert_eq!(&back, m);
        let fwd = d.left.checked_mul(m).unwrap().checked_mul(&d.right).unwrap();
        assert_eq!(fwd, d.diag);
        assert_eq!(d.left.checked_mul(&d.left_inv).unwrap(), IntMatrix::identity(m.rows()));
        assert_eq!(d.right.checked_mul(&d.right_inv).unwrap(), IntMatrix::identity(m.cols()));
        let f = d.invariant_factors();
        assert!(f.iter().all(|&x| x > 0));
        assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j || i >= d.rank {
                    assert_eq!(d.diag[(i, j)], 0);
                }
            }
        }
    }

    #[test]
    fn known_invariant_factors() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let d = smith(&m).unwrap();
        assert_eq!(d.invariant_factors(), vec![2, 6, 12]);
        check(&m);
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = integer_kernel(&m).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(v[0] + 2 * v[1] + 3 * v[2], 0);
        }
        let h = hermite_rows(&k).unwrap();
        assert_eq!(h, vec![vec![1, 1, -1], vec![0, 3, -2]]);
        assert_eq!(solve_in_hermite_basis(&h, &[2, -1, 0]).unwrap(), Some(vec![2, -1]));
        assert_eq!(solve_in_hermite_basis(&h, &[1, 0, 0]).unwrap(), None);
    }

    proptest! {
        #[test]
        fn smith_remultiplies(rows in 1usize..6, cols in 1usize..6, seed in proptest::collection::vec(-9i128..10, 36)) {
            let data: Vec<Vec<i128>> = (0..rows).map(|i| seed[i * 6..i * 6 + cols].to_vec()).collect();
            check(&IntMatrix::from_rows(&data));
        }
    }
}
