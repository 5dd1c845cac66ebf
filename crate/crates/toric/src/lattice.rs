//! Exact integer linear algebra: Smith and Hermite normal forms, cokernels as
//! finitely generated abelian groups, saturated kernels, subgroup tests.
//!
//! Everything here is deterministic: the SNF pivot is the smallest-absolute-value
//! entry with ties broken by lowest row then lowest column, and lattice bases are
//! canonicalized through the (unique) row Hermite normal form.

use crate::arith::{Int, IntVec};
use num::{Integer, One, Signed, Zero};
use std::fmt;

/// Dense row-major matrix over Z. Maps act on column vectors; the image of a
/// matrix is its column span.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Int::one();
        }
        m
    }

    /// Builds from row vectors; all rows must share a length.
    pub fn from_rows(rows: Vec<IntVec>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Builds an r x c matrix from rows, usable when `rows` is empty.
    pub fn from_rows_with_width(rows: Vec<IntVec>, width: usize) -> Self {
        if rows.is_empty() {
            return IntMatrix::zero(0, width);
        }
        let m = IntMatrix::from_rows(rows);
        assert_eq!(m.cols, width);
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(rows.iter().map(|r| crate::arith::vec_i64(r)).collect())
    }

    pub fn row(&self, i: usize) -> IntVec {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> IntVec {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<IntVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> IntVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|i| crate::arith::dot(&self.row(i), v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let pa = a * self.cols + j;
            let pb = b * self.cols + j;
            self.data.swap(pa, pb);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let p = r * self.cols + j;
            let v = -std::mem::take(&mut self.data[p]);
            self.data[p] = v;
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = q * &self[(src, j)];
            self[(dst, j)] += add;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = q * &self[(i, src)];
            self[(i, dst)] += add;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(k, k)] * &m[(i, j)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
                m[(i, k)] = Int::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    /// Rank over Q, via the number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        smith_normal_form(self).invariant_factors().len()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = Int;
    fn index(&self, (i, j): (usize, usize)) -> &Int {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Int {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {}", crate::arith::fmt_vec(&self.row(i)))?;
        }
        write!(f, "]")
    }
}

/// left * a * right is diagonal with the invariant-factor chain d1 | d2 | ...
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    pub diag: Vec<Int>,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries in chain order (each divides the next).
    pub fn invariant_factors(&self) -> Vec<Int> {
        self.diag.iter().filter(|d| !d.is_zero()).cloned().collect()
    }
}

/// Smith normal form with unimodular transforms on both sides.
///
/// Pivot rule: smallest absolute value among nonzero entries of the working
/// submatrix, ties broken by lowest row index then lowest column index.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut m = a.clone();
    let mut left = IntMatrix::identity(a.rows);
    let mut right = IntMatrix::identity(a.cols);
    let steps = a.rows.min(a.cols);

    for k in 0..steps {
        'position: loop {
            // Smallest-|v| pivot in the submatrix at (k.., k..).
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..m.rows {
                for j in k..m.cols {
                    if m[(i, j)].is_zero() {
                        continue;
                    }
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => m[(i, j)].abs() < m[(pi, pj)].abs(),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match pivot {
                None => break 'position, // submatrix is zero
                Some(p) => p,
            };
            m.swap_rows(k, pi);
            left.swap_rows(k, pi);
            m.swap_cols(k, pj);
            right.swap_cols(k, pj);
            if m[(k, k)].is_negative() {
                m.negate_row(k);
                left.negate_row(k);
            }

            // Clear column k below and row k to the right with truncated quotients.
            let mut dirty = false;
            for i in k + 1..m.rows {
                if !m[(i, k)].is_zero() {
                    let q = -(&m[(i, k)] / &m[(k, k)]);
                    m.add_row_multiple(i, k, &q);
                    left.add_row_multiple(i, k, &q);
                    if !m[(i, k)].is_zero() {
                        dirty = true; // remainder left; a smaller pivot now exists
                    }
                }
            }
            for j in k + 1..m.cols {
                if !m[(k, j)].is_zero() {
                    let q = -(&m[(k, j)] / &m[(k, k)]);
                    m.add_col_multiple(j, k, &q);
                    right.add_col_multiple(j, k, &q);
                    if !m[(k, j)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue 'position;
            }

            // Divisibility: pivot must divide the remaining submatrix.
            let mut offender = None;
            'scan: for i in k + 1..m.rows {
                for j in k + 1..m.cols {
                    if !(&m[(i, j)] % &m[(k, k)]).is_zero() {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    m.add_row_multiple(k, i, &Int::one());
                    left.add_row_multiple(k, i, &Int::one());
                }
                None => break 'position,
            }
        }
    }

    let diag = (0..steps).map(|k| m[(k, k)].clone()).collect();
    SmithDecomposition { left, diag, right }
}

/// Row Hermite normal form: h = u * a with u unimodular, h in row echelon form
/// with positive pivots and entries above each pivot reduced into [0, pivot).
/// The nonzero rows of h are the canonical basis of the row lattice of a.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut r = 0;
    for c in 0..h.cols {
        if r == h.rows {
            break;
        }
        // Euclid on column c among rows >= r.
        loop {
            let mut best: Option<usize> = None;
            for i in r..h.rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(b) if h[(i, c)].abs() < h[(b, c)].abs() => Some(i),
                    b => b,
                };
            }
            let b = match best {
                None => break,
                Some(b) => b,
            };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            if h[(r, c)].is_negative() {
                h.negate_row(r);
                u.negate_row(r);
            }
            let mut done = true;
            for i in r + 1..h.rows {
                if !h[(i, c)].is_zero() {
                    let q = -(&h[(i, c)] / &h[(r, c)]);
                    h.add_row_multiple(i, r, &q);
                    u.add_row_multiple(i, r, &q);
                    if !h[(i, c)].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if !h[(r, c)].is_zero() {
            // Reduce entries above the pivot into [0, pivot).
            for i in 0..r {
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
            }
            r += 1;
        }
    }
    (h, u)
}

/// Canonical basis (as rows) of the lattice generated by the given rows.
pub fn canonical_lattice_basis(rows: Vec<IntVec>, width: usize) -> Vec<IntVec> {
    let m = IntMatrix::from_rows_with_width(rows, width);
    let (h, _) = hermite_normal_form(&m);
    (0..h.rows)
        .map(|i| h.row(i))
        .filter(|r| !crate::arith::is_zero_vec(r))
        .collect()
}

pub fn lattice_eq(a: Vec<IntVec>, b: Vec<IntVec>, width: usize) -> bool {
    canonical_lattice_basis(a, width) == canonical_lattice_basis(b, width)
}

/// Basis of the saturated kernel {x in Z^cols : a x = 0}, as matrix columns.
/// The basis is canonical (Hermite-reduced), so equal kernels give equal output.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.invariant_factors().len();
    let cols: Vec<IntVec> = (r..a.cols).map(|j| snf.right.col(j)).collect();
    let rows = canonical_lattice_basis(cols, a.cols);
    IntMatrix::from_rows_with_width(rows, a.cols).transpose()
}

/// Intersection of the lattices generated by the two row families.
pub fn lattice_intersection(a: Vec<IntVec>, b: Vec<IntVec>, width: usize) -> Vec<IntVec> {
    let at = IntMatrix::from_rows_with_width(a, width).transpose();
    let bt = IntMatrix::from_rows_with_width(b, width).transpose();
    let mut stacked = IntMatrix::zero(width, at.cols + bt.cols);
    for i in 0..width {
        for j in 0..at.cols {
            stacked[(i, j)] = at[(i, j)].clone();
        }
        for j in 0..bt.cols {
            stacked[(i, at.cols + j)] = -bt[(i, j)].clone();
        }
    }
    let ker = kernel_basis(&stacked);
    let mut rows = Vec::new();
    for j in 0..ker.cols {
        let y: IntVec = (0..at.cols).map(|i| ker[(i, j)].clone()).collect();
        rows.push(at.mul_vec(&y));
    }
    canonical_lattice_basis(rows, width)
}

/// The lattice {x in Z^n : phi(x) lies in the row lattice of `target`},
/// for phi given by an m x n matrix and target rows of length m.
pub fn preimage_lattice(phi: &IntMatrix, target: Vec<IntVec>, ) -> Vec<IntVec> {
    let tt = IntMatrix::from_rows_with_width(target, phi.rows).transpose();
    let mut stacked = IntMatrix::zero(phi.rows, phi.cols + tt.cols);
    for i in 0..phi.rows {
        for j in 0..phi.cols {
            stacked[(i, j)] = phi[(i, j)].clone();
        }
        for j in 0..tt.cols {
            stacked[(i, phi.cols + j)] = -tt[(i, j)].clone();
        }
    }
    let ker = kernel_basis(&stacked);
    let rows: Vec<IntVec> = (0..ker.cols)
        .map(|j| (0..phi.cols).map(|i| ker[(i, j)].clone()).collect())
        .collect();
    canonical_lattice_basis(rows, phi.cols)
}

/// Solves a x = b over the integers. `None` when no integer solution exists;
/// the free coordinates of the solution space are pinned to zero, so the
/// returned solution is deterministic.
pub fn solve_integer(a: &IntMatrix, b: &[Int]) -> Option<IntVec> {
    assert_eq!(a.rows, b.len());
    let snf = smith_normal_form(a);
    let y = snf.left.mul_vec(b);
    let mut z = vec![Int::zero(); a.cols];
    for i in 0..a.rows {
        let d = if i < snf.diag.len() { snf.diag[i].clone() } else { Int::zero() };
        if d.is_zero() {
            if !y[i].is_zero() {
                return None; // no rational solution either
            }
        } else if i < a.cols {
            let (q, r) = y[i].div_rem(&d);
            if !r.is_zero() {
                return None; // rational but not integral
            }
            z[i] = q;
        }
    }
    Some(snf.right.mul_vec(&z))
}

/// Finitely generated abelian group Z^free_rank + Z/d1 + ... + Z/ds with
/// d1 | d2 | ... and every di >= 2. Element coordinates list the free part
/// first, then one coordinate per torsion factor reduced into [0, di).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FinAbGroup {
    pub free_rank: usize,
    #[serde(with = "crate::serde_int::vec")]
    pub torsion: Vec<Int>,
}

impl FinAbGroup {
    pub fn free(rank: usize) -> Self {
        FinAbGroup { free_rank: rank, torsion: vec![] }
    }

    pub fn coords(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.coords() == 0
    }

    /// Group order; `None` when infinite.
    pub fn order(&self) -> Option<Int> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().product())
    }

    pub fn zero(&self) -> IntVec {
        vec![Int::zero(); self.coords()]
    }

    /// Reduces torsion coordinates into their canonical range.
    pub fn reduce(&self, mut v: IntVec) -> IntVec {
        assert_eq!(v.len(), self.coords());
        for (k, d) in self.torsion.iter().enumerate() {
            let i = self.free_rank + k;
            v[i] = v[i].mod_floor(d);
        }
        v
    }

    pub fn add(&self, a: &[Int], b: &[Int]) -> IntVec {
        self.reduce(crate::arith::vec_add(a, b))
    }

    pub fn neg(&self, a: &[Int]) -> IntVec {
        self.reduce(crate::arith::vec_neg(a))
    }

    pub fn scale(&self, c: &Int, a: &[Int]) -> IntVec {
        self.reduce(crate::arith::vec_scale(c, a))
    }

    pub fn is_zero_elem(&self, a: &[Int]) -> bool {
        crate::arith::is_zero_vec(&self.reduce(a.to_vec()))
    }

    /// Torsion relations di * e_i as full-width coordinate vectors.
    pub fn relation_vectors(&self) -> Vec<IntVec> {
        self.torsion
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let mut v = self.zero();
                v[self.free_rank + k] = d.clone();
                v
            })
            .collect()
    }

    /// True iff the given elements generate the whole group.
    pub fn generates(&self, elems: &[IntVec]) -> bool {
        let n = self.coords();
        if n == 0 {
            return true;
        }
        let mut cols: Vec<IntVec> = elems.to_vec();
        cols.extend(self.relation_vectors());
        let m = IntMatrix::from_rows_with_width(cols, n).transpose();
        let inv = smith_normal_form(&m).invariant_factors();
        inv.len() == n && inv.iter().all(|d| d.is_one())
    }

    /// The quotient of this group by the subgroup the elements generate.
    pub fn quotient_by(&self, elems: &[IntVec]) -> FinAbGroup {
        let n = self.coords();
        let mut cols: Vec<IntVec> = elems.to_vec();
        cols.extend(self.relation_vectors());
        let m = IntMatrix::from_rows_with_width(cols, n).transpose();
        cokernel(&m).group
    }

    /// Generators of the intersection of two subgroups, each given by a
    /// generating set of elements.
    pub fn subgroup_intersection(&self, a: &[IntVec], b: &[IntVec]) -> Vec<IntVec> {
        let n = self.coords();
        let mut ra: Vec<IntVec> = a.to_vec();
        ra.extend(self.relation_vectors());
        let mut rb: Vec<IntVec> = b.to_vec();
        rb.extend(self.relation_vectors());
        lattice_intersection(ra, rb, n)
            .into_iter()
            .map(|v| self.reduce(v))
            .filter(|v| !crate::arith::is_zero_vec(v))
            .collect()
    }

    /// True iff `elem` lies in the subgroup generated by `gens`.
    pub fn subgroup_contains(&self, gens: &[IntVec], elem: &[Int]) -> bool {
        let n = self.coords();
        let mut rows: Vec<IntVec> = gens.to_vec();
        rows.extend(self.relation_vectors());
        let lat = IntMatrix::from_rows_with_width(rows, n).transpose();
        solve_integer(&lat, elem).is_some()
    }
}

/// Cokernel Z^rows / colspan(a), with the projection that sends x to the
/// coordinates of its class (free part first, then torsion).
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FinAbGroup,
    pub projection: IntMatrix,
}

impl Cokernel {
    pub fn project(&self, v: &[Int]) -> IntVec {
        self.group.reduce(self.projection.mul_vec(v))
    }
}

pub fn cokernel(a: &IntMatrix) -> Cokernel {
    let snf = smith_normal_form(a);
    let steps = a.rows.min(a.cols);
    let mut free_rows = Vec::new();
    let mut torsion_rows = Vec::new();
    let mut torsion = Vec::new();
    for i in 0..a.rows {
        let d = if i < steps { snf.diag[i].clone() } else { Int::zero() };
        if d.is_zero() {
            free_rows.push(crate::arith::sign_normalize(&snf.left.row(i)));
        } else if !d.is_one() {
            torsion_rows.push(snf.left.row(i));
            torsion.push(d);
        }
    }
    let group = FinAbGroup { free_rank: free_rows.len(), torsion };
    let mut rows = free_rows;
    rows.append(&mut torsion_rows);
    let projection = IntMatrix::from_rows_with_width(rows, a.rows);
    Cokernel { group, projection }
}
