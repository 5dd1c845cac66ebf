//! Semigroup generators of cone lattices and lattice points of polyhedra.
//!
//! For a pointed cone the minimal generating set of C ∩ Z^n (its Hilbert
//! basis) is computed by enumerating the zonotope box spanned by the extreme
//! rays and keeping the irreducible points. Cones with lineality get plus and
//! minus a lattice basis of the lineality part together with a lifted Hilbert
//! basis of the pointed quotient.

use crate::arith::{vec_neg, vec_sub, Int, IntVec, Rat};
use crate::cone::Cone;
use crate::lattice::{canonical_lattice_basis, IntMatrix};
use num::{One, Signed, ToPrimitive, Zero};

/// All integer points of the box lo <= x <= hi (componentwise), in
/// lexicographic order. Empty when some range is empty.
pub fn box_lattice_points(lo: &[Int], hi: &[Int]) -> Vec<IntVec> {
    assert_eq!(lo.len(), hi.len());
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return vec![];
    }
    let mut out = Vec::new();
    let mut cur: IntVec = lo.to_vec();
    loop {
        out.push(cur.clone());
        // Odometer increment from the last coordinate.
        let mut pos = cur.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if cur[pos] < hi[pos] {
                cur[pos] += 1;
                for i in pos + 1..cur.len() {
                    cur[i] = lo[i].clone();
                }
                break;
            }
        }
    }
}

fn pointed_hilbert_basis(c: &Cone) -> Vec<IntVec> {
    debug_assert!(c.is_strongly_convex());
    if c.gens.is_empty() {
        return vec![];
    }
    let n = c.ambient;
    // Irreducible elements lie in the zonotope of the extreme rays, hence in
    // its bounding box.
    let mut lo = vec![Int::zero(); n];
    let mut hi = vec![Int::zero(); n];
    for g in &c.gens {
        for j in 0..n {
            if g[j].is_negative() {
                lo[j] += &g[j];
            } else {
                hi[j] += &g[j];
            }
        }
    }
    let candidates: Vec<IntVec> = box_lattice_points(&lo, &hi)
        .into_iter()
        .filter(|x| !crate::arith::is_zero_vec(x) && c.contains(x))
        .collect();
    let mut basis: Vec<IntVec> = candidates
        .iter()
        .filter(|p| {
            !candidates
                .iter()
                .any(|q| q != *p && c.contains(&vec_sub(p, q)))
        })
        .cloned()
        .collect();
    basis.sort_by(|a, b| crate::arith::lex_cmp(a, b));
    basis
}

/// Generators of the semigroup C ∩ Z^n: for pointed C this is the Hilbert
/// basis; otherwise plus and minus a basis of the lineality lattice joined
/// with lifts of the quotient Hilbert basis.
pub fn semigroup_generators(c: &Cone) -> Vec<IntVec> {
    let n = c.ambient;
    let lin: Vec<IntVec> = c
        .gens
        .iter()
        .filter(|g| c.gens.contains(&vec_neg(g)))
        .cloned()
        .collect();
    if lin.is_empty() {
        return pointed_hilbert_basis(c);
    }
    let rest: Vec<IntVec> = c.gens.iter().filter(|g| !lin.contains(g)).cloned().collect();
    let mut out = lin.clone();
    if !rest.is_empty() {
        let basis = canonical_lattice_basis(lin, n);
        let k = IntMatrix::from_rows_with_width(basis, n).transpose();
        let (p, s) = crate::cone::quotient_section(&k, n);
        let image: Vec<IntVec> = rest.iter().map(|g| p.mul_vec(g)).collect();
        let q = Cone::from_gens(n - k.cols, image);
        for h in pointed_hilbert_basis(&q) {
            out.push(s.mul_vec(&h));
        }
    }
    out.sort_by(|a, b| crate::arith::lex_cmp(a, b));
    out
}

#[derive(Debug, Clone, thiserror::Error)]
pub enum PolytopeError {
    #[error("polyhedron is unbounded (recession direction {0:?})")]
    Unbounded(IntVec),
}

/// Integer points of {u : <row, u> + c >= 0 for each (row, c)}, sorted
/// lexicographically. Unbounded polyhedra report a recession direction.
pub fn polytope_points(ineqs: &[(IntVec, Int)]) -> Result<Vec<IntVec>, PolytopeError> {
    let n = ineqs.first().map_or(0, |(r, _)| r.len());
    assert!(ineqs.iter().all(|(r, _)| r.len() == n));
    // Homogenize: (u, t) with each <row,u> + c t >= 0 and t >= 0; the
    // polytope is the t = 1 slice and t = 0 rays are recession directions.
    let mut rows: Vec<IntVec> = ineqs
        .iter()
        .map(|(r, c)| {
            let mut v = r.clone();
            v.push(c.clone());
            v
        })
        .collect();
    let mut t_row = vec![Int::zero(); n];
    t_row.push(Int::one());
    rows.push(t_row);
    let ch = Cone::from_ineqs(n + 1, rows);

    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    for g in &ch.gens {
        let t = &g[n];
        if t.is_zero() {
            return Err(PolytopeError::Unbounded(g[..n].to_vec()));
        }
        vertices.push(
            g[..n]
                .iter()
                .map(|x| Rat::new(x.clone(), t.clone()))
                .collect(),
        );
    }
    if vertices.is_empty() {
        return Ok(vec![]);
    }
    let lo: IntVec = (0..n)
        .map(|j| vertices.iter().map(|v| v[j].clone()).min().unwrap().ceil().to_integer())
        .collect();
    let hi: IntVec = (0..n)
        .map(|j| vertices.iter().map(|v| v[j].clone()).max().unwrap().floor().to_integer())
        .collect();
    Ok(filter_points(box_lattice_points(&lo, &hi), ineqs))
}

/// Integer points of the same system inside an explicit box; for use when the
/// polyhedron is unbounded.
pub fn polytope_points_boxed(ineqs: &[(IntVec, Int)], lo: &[Int], hi: &[Int]) -> Vec<IntVec> {
    filter_points(box_lattice_points(lo, hi), ineqs)
}

fn filter_points(pts: Vec<IntVec>, ineqs: &[(IntVec, Int)]) -> Vec<IntVec> {
    pts.into_iter()
        .filter(|u| {
            ineqs
                .iter()
                .all(|(r, c)| !(crate::arith::dot(r, u) + c).is_negative())
        })
        .collect()
}

/// Rough size estimate used to guard enumeration-based routines.
pub fn box_volume(lo: &[Int], hi: &[Int]) -> Option<u64> {
    let mut vol: u64 = 1;
    for (a, b) in lo.iter().zip(hi) {
        if a > b {
            return Some(0);
        }
        let w = (b - a + 1u8).to_u64()?;
        vol = vol.checked_mul(w)?;
    }
    Some(vol)
}
