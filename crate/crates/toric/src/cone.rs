//! Rational polyhedral cones with a canonical presentation.
//!
//! A cone is stored by its canonical generator list together with the
//! canonical generator list of its dual (the inequality description). The
//! canonical list is: plus and minus each Hermite-basis vector of the
//! lineality lattice, then one primitive lift of each extreme ray of the
//! pointed quotient, all sorted lexicographically. Two generator lists
//! describe the same cone exactly when their canonical forms are equal.

use crate::arith::{dot, is_zero_vec, lex_cmp, primitive, vec_neg, vec_scale, vec_sub, Int, IntVec};
use crate::lattice::{cokernel, kernel_basis, smith_normal_form, solve_integer, IntMatrix};
use num::{One, Signed, Zero};
use std::cmp::Ordering;

/// Classical adjugate; `b * adjugate(b) = det(b) * identity`.
fn adjugate(b: &IntMatrix) -> IntMatrix {
    let n = b.rows;
    assert_eq!(n, b.cols);
    let mut adj = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut minor = IntMatrix::zero(n - 1, n - 1);
            for (mi, bi) in (0..n).filter(|&r| r != j).enumerate() {
                for (mj, bj) in (0..n).filter(|&c| c != i).enumerate() {
                    minor[(mi, mj)] = b[(bi, bj)].clone();
                }
            }
            let mut c = minor.determinant();
            if (i + j) % 2 == 1 {
                c = -c;
            }
            adj[(i, j)] = c;
        }
    }
    adj
}

/// Extreme rays of the pointed cone {y : <c, y> >= 0 for all c}, where the
/// constraint rows have full column rank `dim`. Incremental double
/// description with the combinatorial adjacency test.
fn pointed_extreme_rays(constraints: &[IntVec], dim: usize) -> Vec<IntVec> {
    if dim == 0 {
        return vec![];
    }
    // Normalize the constraint list; scaling and repetition do not change the cone.
    let mut cs: Vec<IntVec> = Vec::new();
    for c in constraints {
        if is_zero_vec(c) {
            continue;
        }
        let p = primitive(c);
        if !cs.contains(&p) {
            cs.push(p);
        }
    }
    assert!(cs.len() <= 128, "too many constraints for mask-based adjacency");

    // First `dim` linearly independent constraints, in input order.
    let mut picked: Vec<usize> = Vec::new();
    for i in 0..cs.len() {
        if picked.len() == dim {
            break;
        }
        let mut rows: Vec<IntVec> = picked.iter().map(|&j| cs[j].clone()).collect();
        rows.push(cs[i].clone());
        let r = IntMatrix::from_rows_with_width(rows, dim).rank();
        if r > picked.len() {
            picked.push(i);
        }
    }
    assert_eq!(picked.len(), dim, "constraints do not have full column rank");

    let b = IntMatrix::from_rows_with_width(picked.iter().map(|&j| cs[j].clone()).collect(), dim);
    let det = b.determinant();
    let adj = adjugate(&b);
    let mut rays: Vec<IntVec> = (0..dim)
        .map(|j| {
            let col = adj.col(j);
            let scaled = if det.is_negative() { vec_neg(&col) } else { col };
            primitive(&scaled)
        })
        .collect();

    let mut processed: Vec<IntVec> = picked.iter().map(|&j| cs[j].clone()).collect();
    let zeroset = |r: &IntVec, processed: &[IntVec]| -> u128 {
        let mut mask = 0u128;
        for (i, c) in processed.iter().enumerate() {
            if dot(c, r).is_zero() {
                mask |= 1 << i;
            }
        }
        mask
    };

    for (idx, c) in cs.iter().enumerate() {
        if picked.contains(&idx) {
            continue;
        }
        let vals: Vec<Int> = rays.iter().map(|r| dot(c, r)).collect();
        let mut next: Vec<IntVec> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if !v.is_negative() {
                next.push(r.clone());
            }
        }
        let masks: Vec<u128> = rays.iter().map(|r| zeroset(r, &processed)).collect();
        for (pi, vp) in vals.iter().enumerate() {
            if !vp.is_positive() {
                continue;
            }
            for (qi, vq) in vals.iter().enumerate() {
                if !vq.is_negative() {
                    continue;
                }
                // Adjacency: no third ray is tight on everything p and q share.
                let common = masks[pi] & masks[qi];
                let adjacent = !masks
                    .iter()
                    .enumerate()
                    .any(|(ri, m)| ri != pi && ri != qi && m & common == common);
                if !adjacent {
                    continue;
                }
                let w = vec_sub(&vec_scale(vp, &rays[qi]), &vec_scale(vq, &rays[pi]));
                let w = primitive(&w);
                if !next.contains(&w) {
                    next.push(w);
                }
            }
        }
        rays = next;
        processed.push(c.clone());
    }
    rays
}

/// Projection to the quotient by the column lattice of `k` (which must be
/// saturated), together with an integral section of it.
pub(crate) fn quotient_section(k: &IntMatrix, ambient: usize) -> (IntMatrix, IntMatrix) {
    if k.cols == 0 {
        return (IntMatrix::identity(ambient), IntMatrix::identity(ambient));
    }
    let ck = cokernel(k);
    debug_assert!(ck.group.torsion.is_empty(), "quotient lattice must be free");
    let p = ck.projection;
    let q = p.rows;
    let mut s = IntMatrix::zero(ambient, q);
    for j in 0..q {
        let mut e = vec![Int::zero(); q];
        e[j] = Int::one();
        let col = solve_integer(&p, &e).expect("projection is surjective");
        for i in 0..ambient {
            s[(i, j)] = col[i].clone();
        }
    }
    (p, s)
}

/// Canonical generators of the dual cone {u : <u, g> >= 0 for all g in gens}.
/// Depends only on the cone the generators span, not on their presentation.
pub fn dual_generators(ambient: usize, gens: &[IntVec]) -> Vec<IntVec> {
    let a = IntMatrix::from_rows_with_width(gens.to_vec(), ambient);
    let k = kernel_basis(&a);
    let mut out: Vec<IntVec> = Vec::new();
    for j in 0..k.cols {
        let c = k.col(j);
        out.push(vec_neg(&c));
        out.push(c);
    }
    if k.cols < ambient {
        let (_, s) = quotient_section(&k, ambient);
        let st = s.transpose();
        let reduced: Vec<IntVec> = gens.iter().map(|g| st.mul_vec(g)).collect();
        for r in pointed_extreme_rays(&reduced, ambient - k.cols) {
            out.push(s.mul_vec(&r));
        }
    }
    out.sort_by(|x, y| lex_cmp(x, y));
    out
}

/// Canonical generators of the cone spanned by `gens` (double dual).
pub fn canonical_generators(ambient: usize, gens: &[IntVec]) -> Vec<IntVec> {
    dual_generators(ambient, &dual_generators(ambient, gens))
}

/// A rational polyhedral cone in canonical form. `gens` generate the cone,
/// `ineqs` generate the dual; both lists are canonical, so equality of cones
/// is equality of the `gens` fields.
#[derive(Clone, PartialEq, Eq)]
pub struct Cone {
    pub ambient: usize,
    pub gens: Vec<IntVec>,
    pub ineqs: Vec<IntVec>,
}

impl std::fmt::Debug for Cone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cone[")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", crate::arith::fmt_vec(g))?;
        }
        write!(f, "]")
    }
}

impl Cone {
    pub fn from_gens(ambient: usize, gens: Vec<IntVec>) -> Cone {
        let ineqs = dual_generators(ambient, &gens);
        let gens = dual_generators(ambient, &ineqs);
        Cone { ambient, gens, ineqs }
    }

    pub fn from_ineqs(ambient: usize, ineqs: Vec<IntVec>) -> Cone {
        let gens = dual_generators(ambient, &ineqs);
        let ineqs = dual_generators(ambient, &gens);
        Cone { ambient, gens, ineqs }
    }

    pub fn zero(ambient: usize) -> Cone {
        Cone::from_gens(ambient, vec![])
    }

    pub fn full(ambient: usize) -> Cone {
        Cone::from_ineqs(ambient, vec![])
    }

    pub fn dual(&self) -> Cone {
        Cone { ambient: self.ambient, gens: self.ineqs.clone(), ineqs: self.gens.clone() }
    }

    pub fn contains(&self, x: &[Int]) -> bool {
        self.ineqs.iter().all(|u| !dot(u, x).is_negative())
    }

    pub fn relative_interior_contains(&self, x: &[Int]) -> bool {
        self.ineqs.iter().all(|u| {
            let v = dot(u, x);
            if self.ineqs.contains(&vec_neg(u)) {
                v.is_zero()
            } else {
                v.is_positive()
            }
        })
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn gens_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows_with_width(self.gens.clone(), self.ambient)
    }

    pub fn dim(&self) -> usize {
        self.gens_matrix().rank()
    }

    pub fn lineality_dim(&self) -> usize {
        self.gens.iter().filter(|g| self.gens.contains(&vec_neg(g))).count() / 2
    }

    pub fn is_strongly_convex(&self) -> bool {
        self.lineality_dim() == 0
    }

    pub fn is_simplicial(&self) -> bool {
        self.is_strongly_convex() && self.gens.len() == self.dim()
    }

    /// Index of the subgroup spanned by the rays inside its saturation.
    /// Defined (Some) exactly for simplicial cones.
    pub fn multiplicity(&self) -> Option<Int> {
        if !self.is_simplicial() {
            return None;
        }
        let inv = smith_normal_form(&self.gens_matrix()).invariant_factors();
        Some(inv.iter().product())
    }

    pub fn is_smooth(&self) -> bool {
        self.multiplicity().is_some_and(|m| m.is_one())
    }

    /// All faces, each in canonical form, including the cone itself and its
    /// minimal face. Enumerates subsets of the dual generators as supporting
    /// functional sets, so it is meant for the small cones fans are made of.
    pub fn faces(&self) -> Vec<Cone> {
        assert!(self.ineqs.len() <= 20, "face enumeration over too many inequalities");
        let mut seen: Vec<Vec<IntVec>> = Vec::new();
        let mut out: Vec<Cone> = Vec::new();
        for mask in 0..(1u64 << self.ineqs.len()) {
            let tight: Vec<&IntVec> = self
                .ineqs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, u)| u)
                .collect();
            // A face of a cone is spanned by the generators it contains.
            let fg: Vec<IntVec> = self
                .gens
                .iter()
                .filter(|g| tight.iter().all(|u| dot(u, g).is_zero()))
                .cloned()
                .collect();
            if seen.contains(&fg) {
                continue;
            }
            let face = Cone {
                ambient: self.ambient,
                ineqs: dual_generators(self.ambient, &fg),
                gens: fg.clone(),
            };
            debug_assert_eq!(face.gens, dual_generators(self.ambient, &face.ineqs));
            seen.push(fg);
            out.push(face);
        }
        out.sort_by(|a, b| {
            a.gens.len().cmp(&b.gens.len()).then_with(|| match (a.gens.first(), b.gens.first()) {
                (Some(x), Some(y)) => lex_cmp(x, y),
                _ => Ordering::Equal,
            })
        });
        out
    }

    pub fn faces_of_dim(&self, d: usize) -> Vec<Cone> {
        self.faces().into_iter().filter(|f| f.dim() == d).collect()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        other.faces().iter().any(|f| f.gens == self.gens)
    }

    pub fn intersect(&self, other: &Cone) -> Cone {
        assert_eq!(self.ambient, other.ambient);
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        Cone::from_ineqs(self.ambient, ineqs)
    }
}
