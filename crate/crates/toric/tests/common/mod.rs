//! Shared oracles and random generators for the integration suites.
//!
//! Every oracle reaches its answer by a route disjoint from the
//! implementation it cross-checks (cofactor determinants against the Smith
//! form, minor gcds against invariant factors, Fourier-Motzkin against the
//! simplex, rational feasibility against the cone algebra, bitmask brute
//! force against the component machinery), so agreement is evidence rather
//! than tautology.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use toric::akset::{FiniteSpace, OpenFamily};
use toric::arith::{is_zero_vec, primitive, rat, vec_add, vec_neg, Int, IntVec, Rat};
use toric::embed::QuotientPresentation;
use toric::fan::Fan;
use toric::hilbert::box_lattice_points;
use toric::lattice::{kernel_basis, IntMatrix};
use toric::lp::{lp_feasible, LinConstraint, Rel};

/// Determinant by cofactor expansion, independent of the elimination-based
/// routines in the library. Sizes stay at most 4 in the suites.
pub fn det(rows: &[IntVec]) -> Int {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n));
    if n == 0 {
        return Int::from(1);
    }
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut total = Int::from(0);
    for (j, top) in rows[0].iter().enumerate() {
        let minor: Vec<IntVec> = rows[1..]
            .iter()
            .map(|r| {
                r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()
            })
            .collect();
        let term = top * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn gcd(a: Int, b: Int) -> Int {
    num::Integer::gcd(&a, &b)
}

fn size_k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
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

/// Invariant factors from minor gcds: d_k = D_k / D_(k-1) where D_k is the
/// gcd of all k x k minors. The classical characterization of the Smith
/// form, computed here without any matrix elimination.
pub fn minor_gcd_invariant_factors(a: &IntMatrix) -> Vec<Int> {
    let mut out = Vec::new();
    let mut prev = Int::from(1);
    for k in 1..=a.rows.min(a.cols) {
        let mut d = Int::from(0);
        for rs in size_k_subsets(a.rows, k) {
            for cs in size_k_subsets(a.cols, k) {
                let sub: Vec<IntVec> =
                    rs.iter().map(|&i| cs.iter().map(|&j| a[(i, j)].clone()).collect()).collect();
                d = gcd(d, det(&sub));
            }
        }
        if d == Int::from(0) {
            break;
        }
        out.push(num::Signed::abs(&(&d / &prev)));
        prev = d;
    }
    out
}

/// A random linear system over at most three variables, in a neutral form
/// both deciders consume.
#[derive(Clone, Debug)]
pub struct RandomSystem {
    pub n_vars: usize,
    pub rows: Vec<(Vec<i64>, Rel, i64)>,
}

pub fn random_system(rng: &mut ChaCha8Rng) -> RandomSystem {
    let n_vars = rng.gen_range(1..=3);
    let n_rows = rng.gen_range(1..=6);
    let rows = (0..n_rows)
        .map(|_| {
            let coeffs: Vec<i64> = (0..n_vars).map(|_| rng.gen_range(-4..=4)).collect();
            let rel = match rng.gen_range(0..3) {
                0 => Rel::Ge,
                1 => Rel::Le,
                _ => Rel::Eq,
            };
            (coeffs, rel, rng.gen_range(-4..=4))
        })
        .collect();
    RandomSystem { n_vars, rows }
}

pub fn system_constraints(sys: &RandomSystem) -> Vec<LinConstraint> {
    sys.rows
        .iter()
        .map(|(coeffs, rel, rhs)| {
            let named: Vec<(String, Rat)> = coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| (format!("x{j}"), rat(c, 1)))
                .collect();
            LinConstraint::new(named, *rel, rat(*rhs, 1))
        })
        .collect()
}

/// Fourier-Motzkin feasibility over the rationals: rewrite everything as
/// `a . x >= b`, eliminate the variables one by one by combining rows of
/// opposite sign, and read feasibility off the variable-free residue.
pub fn fourier_motzkin_feasible(sys: &RandomSystem) -> bool {
    let zero = rat(0, 1);
    let mut ineqs: Vec<(Vec<Rat>, Rat)> = Vec::new();
    for (coeffs, rel, rhs) in &sys.rows {
        let a: Vec<Rat> = coeffs.iter().map(|&c| rat(c, 1)).collect();
        let b = rat(*rhs, 1);
        match rel {
            Rel::Ge => ineqs.push((a, b)),
            Rel::Le => ineqs.push((a.iter().map(|c| -c).collect(), -b)),
            Rel::Eq => {
                ineqs.push((a.iter().map(|c| -c).collect(), -b.clone()));
                ineqs.push((a, b));
            }
        }
    }
    for var in 0..sys.n_vars {
        let mut pos: Vec<(Vec<Rat>, Rat)> = Vec::new();
        let mut neg: Vec<(Vec<Rat>, Rat)> = Vec::new();
        let mut next: Vec<(Vec<Rat>, Rat)> = Vec::new();
        for (a, b) in ineqs {
            if a[var] > zero {
                pos.push((a, b));
            } else if a[var] < zero {
                neg.push((a, b));
            } else {
                next.push((a, b));
            }
        }
        for (pa, pb) in &pos {
            for (na, nb) in &neg {
                // p/(p_var) gives a lower bound, -n/(n_var) an upper one;
                // cross-multiplying with positive factors keeps direction.
                let row: Vec<Rat> = pa
                    .iter()
                    .zip(na)
                    .map(|(p, n)| p * (-&na[var]) + n * &pa[var])
                    .collect();
                let rhs = pb * (-&na[var]) + nb * &pa[var];
                next.push((row, rhs));
            }
        }
        ineqs = next;
    }
    ineqs.iter().all(|(_, b)| *b <= zero)
}

fn basic_smooth_complete(rng: &mut ChaCha8Rng, rank: usize) -> Fan {
    let f = |rank: usize, rays: &[&[i64]], cones: &[&[usize]]| Fan {
        rank,
        rays: rays.iter().map(|r| toric::arith::vec_i64(r)).collect(),
        max_cones: cones.iter().map(|c| c.to_vec()).collect(),
    };
    match rank {
        1 => toric::corpus::projective_line(),
        2 => {
            if rng.gen_bool(0.5) {
                toric::corpus::projective_plane()
            } else {
                toric::corpus::product_of_lines()
            }
        }
        3 => {
            if rng.gen_bool(0.5) {
                // Projective 3-space.
                f(
                    3,
                    &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]],
                    &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
                )
            } else {
                // Triple product of lines: the octant fan.
                f(
                    3,
                    &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]],
                    &[
                        &[0, 2, 4],
                        &[0, 2, 5],
                        &[0, 3, 4],
                        &[0, 3, 5],
                        &[1, 2, 4],
                        &[1, 2, 5],
                        &[1, 3, 4],
                        &[1, 3, 5],
                    ],
                )
            }
        }
        _ => unreachable!("suites use rank 1..=3"),
    }
}

/// Replaces a maximal cone by its star around a new interior ray. For
/// simplicial fans this keeps validity, completeness, and simpliciality;
/// with unit weights it also keeps smoothness.
fn stellar_subdivide(fan: &mut Fan, cone_idx: usize, weights: &[i64]) {
    let cone = fan.max_cones.swap_remove(cone_idx);
    assert_eq!(cone.len(), weights.len());
    let mut w = vec![Int::from(0); fan.rank];
    for (&i, &a) in cone.iter().zip(weights) {
        w = vec_add(&w, &fan.rays[i].iter().map(|x| x * Int::from(a)).collect::<Vec<_>>());
    }
    fan.rays.push(primitive(&w));
    let new_idx = fan.rays.len() - 1;
    for drop in 0..cone.len() {
        let mut sub: Vec<usize> =
            cone.iter().enumerate().filter(|(p, _)| *p != drop).map(|(_, &i)| i).collect();
        sub.push(new_idx);
        fan.max_cones.push(sub);
    }
}

/// Random smooth complete fan of the given rank: a basic one refined by
/// stellar subdivisions at cone barycenters (unit weights preserve
/// smoothness).
pub fn random_smooth_complete_fan(rng: &mut ChaCha8Rng, rank: usize, max_rays: usize) -> Fan {
    let mut fan = basic_smooth_complete(rng, rank);
    if rank > 1 {
        while fan.rays.len() < max_rays && rng.gen_bool(0.7) {
            let idx = rng.gen_range(0..fan.max_cones.len());
            let w = vec![1; fan.max_cones[idx].len()];
            stellar_subdivide(&mut fan, idx, &w);
        }
    }
    let v = fan.clone().validate().expect("generated fan is valid");
    assert!(v.props().smooth && v.props().complete);
    fan
}

/// Random complete simplicial fan: smooth start, then weighted stellar
/// subdivisions that introduce multiplicities.
pub fn random_complete_simplicial_fan(rng: &mut ChaCha8Rng, rank: usize, max_rays: usize) -> Fan {
    let mut fan = basic_smooth_complete(rng, rank);
    if rank > 1 {
        while fan.rays.len() < max_rays && rng.gen_bool(0.7) {
            let idx = rng.gen_range(0..fan.max_cones.len());
            let w: Vec<i64> =
                (0..fan.max_cones[idx].len()).map(|_| rng.gen_range(1..=3)).collect();
            stellar_subdivide(&mut fan, idx, &w);
        }
    }
    let v = fan.clone().validate().expect("generated fan is valid");
    assert!(v.props().simplicial && v.props().complete);
    fan
}

/// Random full-dimensional simplicial cone as a one-cone fan, together with
/// its multiplicity computed purely by cofactor determinant.
pub fn random_simplicial_cone_fan(rng: &mut ChaCha8Rng) -> (Fan, Int) {
    let rank = rng.gen_range(1..=3);
    loop {
        let rows: Vec<IntVec> = (0..rank)
            .map(|_| (0..rank).map(|_| Int::from(rng.gen_range(-4..=4i64))).collect())
            .collect();
        if det(&rows) == Int::from(0) {
            continue;
        }
        let rays: Vec<IntVec> = rows.iter().map(|r| primitive(r)).collect();
        let mult = num::Signed::abs(&det(&rays));
        let fan = Fan { rank, rays, max_cones: vec![(0..rank).collect()] };
        return (fan, mult);
    }
}

/// Rank of the lattice of support functions: tuples of per-cone linear
/// functionals agreeing on shared rays. Global functionals always
/// contribute `rank`, so the excess over `rank` is the rank of the Cartier
/// class lattice. Computed from one kernel of an explicit gluing matrix,
/// independent of the per-chart feasibility route.
pub fn support_function_rank(v: &toric::fan::ValidatedFan) -> usize {
    let d = v.rank();
    let s = v.n_max_cones();
    let mut rows: Vec<IntVec> = Vec::new();
    for rho in 0..v.n_rays() {
        let containing: Vec<usize> =
            (0..s).filter(|&i| v.max_ray_set(i).contains(&rho)).collect();
        for pair in containing.windows(2) {
            let mut row = vec![Int::from(0); d * s];
            for t in 0..d {
                row[pair[0] * d + t] = v.rays()[rho][t].clone();
                row[pair[1] * d + t] = -v.rays()[rho][t].clone();
            }
            rows.push(row);
        }
    }
    kernel_basis(&IntMatrix::from_rows_with_width(rows, d * s)).cols
}

/// Box-bounded brute-force separatedness for subfamilies of one
/// presentation's chart family, with cone membership decided by rational
/// feasibility instead of the cone algebra. Sound whenever the box contains
/// a primitive generator of every lineality line and every extremal ray of
/// pairwise image-cone intersections; the suite presentations have all such
/// witnesses within entries of absolute value 3.
pub struct FaceMembership {
    points: Vec<IntVec>,
    neg: Vec<usize>,
    table: Vec<Vec<bool>>,
    face_index: BTreeMap<Vec<usize>, usize>,
}

impl FaceMembership {
    pub fn new(qp: &QuotientPresentation, bound: i64) -> FaceMembership {
        let r = qp.rank();
        let b = Int::from(bound);
        let points = box_lattice_points(&vec![-b.clone(); r], &vec![b; r]);
        let lookup: BTreeMap<IntVec, usize> =
            points.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let neg: Vec<usize> = points.iter().map(|p| lookup[&vec_neg(p)]).collect();
        let mut face_index = BTreeMap::new();
        let mut table = Vec::new();
        for face in &qp.cones {
            face_index.insert(face.clone(), table.len());
            table.push(points.iter().map(|v| face_cone_contains(qp, face, v)).collect());
        }
        FaceMembership { points, neg, table, face_index }
    }

    /// Oracle decision for the subfamily given by indices into the
    /// presentation's face list: image cones strongly convex, and every
    /// pairwise intersection contained in the meet's image.
    pub fn separated(&self, subfamily: &[usize]) -> bool {
        for &f in subfamily {
            for (pi, v) in self.points.iter().enumerate() {
                if !is_zero_vec(v) && self.table[f][pi] && self.table[f][self.neg[pi]] {
                    return false;
                }
            }
        }
        for (a, &f) in subfamily.iter().enumerate() {
            for &g in &subfamily[a + 1..] {
                let meet = self.meet_row(f, g);
                for pi in 0..self.points.len() {
                    if self.table[f][pi] && self.table[g][pi] && !self.table[meet][pi] {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn meet_row(&self, f: usize, g: usize) -> usize {
        let (fa, _) = self.face_index.iter().find(|(_, &i)| i == f).unwrap();
        let (ga, _) = self.face_index.iter().find(|(_, &i)| i == g).unwrap();
        let meet: Vec<usize> = fa.iter().filter(|i| ga.contains(i)).copied().collect();
        *self
            .face_index
            .get(&meet)
            .expect("downward-closed families contain every meet")
    }
}

/// Membership of v in the cone spanned by a face's image columns, as a
/// rational feasibility problem: nonnegative x with Q_face x = v.
pub fn face_cone_contains(qp: &QuotientPresentation, face: &[usize], v: &[Int]) -> bool {
    let mut constraints: Vec<LinConstraint> = Vec::new();
    for (i, row) in qp.q.iter().enumerate() {
        let coeffs: Vec<(String, Rat)> = face
            .iter()
            .map(|&j| (format!("x{j}"), Rat::from_integer(row[j].clone())))
            .collect();
        constraints.push(LinConstraint::new(
            coeffs,
            Rel::Eq,
            Rat::from_integer(v[i].clone()),
        ));
    }
    for &j in face {
        constraints.push(LinConstraint::new(
            vec![(format!("x{j}"), rat(1, 1))],
            Rel::Ge,
            rat(0, 1),
        ));
    }
    lp_feasible(&constraints).is_some()
}

/// All open subsets with the k-tuple property, by exhaustive bitmask
/// enumeration straight from the definitions (no components, no operator).
pub fn open_uk_subsets(
    space: &FiniteSpace,
    family: &OpenFamily,
    k: u32,
) -> Vec<BTreeSet<usize>> {
    let n = space.n_points();
    assert!(n <= 16, "bitmask brute force is for small spaces");
    let closure_masks: Vec<u32> = space
        .closures
        .iter()
        .map(|c| c.iter().fold(0u32, |m, &x| m | 1 << x))
        .collect();
    // Which family members contain each point.
    let fam_masks: Vec<u64> = (0..n)
        .map(|p| {
            family
                .sets
                .iter()
                .enumerate()
                .fold(0u64, |m, (i, s)| if s.contains(&p) { m | 1 << i } else { m })
        })
        .collect();
    let mut out = Vec::new();
    'mask: for mask in 0u32..(1 << n) {
        for x in 0..n {
            if mask >> x & 1 == 0 && closure_masks[x] & mask != 0 {
                continue 'mask; // not open: a missing point specializes in
            }
        }
        let pts: Vec<usize> = (0..n).filter(|x| mask >> x & 1 == 1).collect();
        let mut tuple = vec![0usize; k as usize];
        let mut ok = true;
        if !pts.is_empty() {
            'tuples: loop {
                let mut common = u64::MAX;
                for &t in &tuple {
                    common &= fam_masks[pts[t]];
                }
                if common == 0 {
                    ok = false;
                    break;
                }
                let mut pos = 0;
                loop {
                    tuple[pos] += 1;
                    if tuple[pos] < pts.len() {
                        break;
                    }
                    tuple[pos] = 0;
                    pos += 1;
                    if pos == tuple.len() {
                        break 'tuples;
                    }
                }
            }
        }
        if ok {
            out.push(pts.into_iter().collect());
        }
    }
    out
}

/// Maximal elements of [`open_uk_subsets`], sorted: the brute-force answer
/// the component machinery must reproduce exactly.
pub fn brute_force_maximal_uk(
    space: &FiniteSpace,
    family: &OpenFamily,
    k: u32,
) -> Vec<BTreeSet<usize>> {
    let all = open_uk_subsets(space, family, k);
    let mut maximal: Vec<BTreeSet<usize>> = all
        .iter()
        .filter(|y| !all.iter().any(|z| *y != z && y.is_subset(z)))
        .cloned()
        .collect();
    maximal.sort();
    maximal
}

/// Random orbit space: a complete simplicial surface or line fan, with a
/// random selection of maximal cones kept (dropping the rest and any rays
/// they alone used), so non-complete posets appear too.
pub fn random_orbit_space(rng: &mut ChaCha8Rng) -> FiniteSpace {
    let rank = rng.gen_range(1..=2);
    let mut fan = random_complete_simplicial_fan(rng, rank, 4);
    if rng.gen_bool(0.5) && fan.max_cones.len() > 1 {
        let keep = rng.gen_range(1..fan.max_cones.len());
        while fan.max_cones.len() > keep {
            let idx = rng.gen_range(0..fan.max_cones.len());
            fan.max_cones.swap_remove(idx);
        }
        let used: BTreeSet<usize> = fan.max_cones.iter().flatten().copied().collect();
        let relabel: BTreeMap<usize, usize> =
            used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        fan.rays = used.iter().map(|&i| fan.rays[i].clone()).collect();
        for c in &mut fan.max_cones {
            for i in c.iter_mut() {
                *i = relabel[i];
            }
        }
    }
    let v = fan.validate().expect("trimmed fan is valid");
    assert!(v.orbits().len() <= 10);
    FiniteSpace::from_fan(&v)
}
