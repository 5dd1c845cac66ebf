//! Quotient presentations of a toric variety through graded section rings.
//!
//! Starting from divisoriality certificates (one effective Cartier divisor per
//! maximal cone, supported exactly off that cone), this module assembles a
//! finitely generated free group of divisor classes, enumerates the
//! multigraded semigroup of invariant sections, and presents the variety as a
//! good quotient of an affine cone minus a small closed subset. The classical
//! presentation as a quotient of affine space by the class-group torus
//! ([`cox_presentation`]) is the special case where the grading is the whole
//! class group; [`finite_group_quotient`] removes finite chart stabilizers by
//! passing to the subring of invariant monomials.
//!
//! All searches are exact. The only incompleteness is the layer bound of
//! [`section_semigroup`], which is reported through a flag instead of being
//! silently trusted.

use crate::arith::{
    ceil_div, content, dot, is_zero_vec, lex_cmp, vec_add, vec_scale, vec_sub, Int, IntVec,
};
use crate::cone::Cone;
use crate::divisor::{
    cartier_data, class_group, verify_cartier, verify_divisorial_certificate, CartierData,
    CertificateError, DivisorError, DivisorialCertificate, WeilDivisor,
};
use crate::fan::{Fan, ValidatedFan};
use crate::hilbert::{
    box_lattice_points, box_volume, polytope_points, semigroup_generators, PolytopeError,
};
use crate::lattice::{
    canonical_lattice_basis, cokernel, hermite_normal_form, kernel_basis, preimage_lattice,
    solve_integer, FinAbGroup, IntMatrix,
};
use crate::par::par_map;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// How certificate divisors are merged into a basis of the grading group.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum MergePolicy {
    /// Hermite-reduce the certificate classes: the basis generates the full
    /// certificate class lattice with as few divisors as possible. Basis
    /// divisors are integer combinations and need not be effective.
    #[default]
    MinimalRank,
    /// Keep one certificate divisor per maximal cone while its class is
    /// independent of the earlier ones. Same rank, but the grading lattice
    /// may be coarser, so chart sections can need a multiple of the divisor.
    OnePerCone,
}

/// One chart-trivializing section of the grading group: the monomial
/// `x^numerator * f_1^lambda_1 * ... * f_r^lambda_r` whose divisor is
/// effective with support exactly the rays outside the chart cone.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CoverSection {
    pub cone: usize,
    #[serde(with = "crate::serde_int::vec")]
    pub numerator: IntVec,
    #[serde(with = "crate::serde_int::vec")]
    pub lambda: IntVec,
}

/// A finitely generated free group of Cartier divisors trivializing every
/// chart: basis divisors with independent torsion-free classes, plus one
/// cover section per maximal cone witnessing that the chart is the
/// complement of an effective divisor from the group.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AmpleGroup {
    pub basis: Vec<CartierData>,
    /// Free-part class coordinates of each basis divisor; torsion parts are
    /// zero by construction.
    #[serde(with = "crate::serde_int::vec_vec")]
    pub degrees: Vec<IntVec>,
    pub cover: Vec<CoverSection>,
}

impl AmpleGroup {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Ray coefficients of the divisor sum lambda_i L_i.
    pub fn layer_coeffs(&self, lambda: &[Int]) -> IntVec {
        assert_eq!(lambda.len(), self.basis.len());
        assert!(!self.basis.is_empty(), "layer coefficients need a basis divisor");
        let mut out = vec![Int::zero(); self.basis[0].coeffs.len()];
        for (li, b) in lambda.iter().zip(&self.basis) {
            for (o, c) in out.iter_mut().zip(&b.coeffs) {
                *o += li * c;
            }
        }
        out
    }
}

/// The multigraded semigroup of sections {(u, lambda) : div(x^u) + sum
/// lambda_i L_i >= 0}: monomial coordinates on the affine cone the grading
/// group spreads over the variety.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SectionSemigroup {
    /// Character lattice dimension (the `u` part of an element).
    pub m_dim: usize,
    /// Grading rank (the `lambda` part of an element).
    pub rank: usize,
    /// Ray inequality rows (v_rho | a_1,rho .. a_r,rho) cutting out the
    /// semigroup cone in Z^(m_dim + rank).
    #[serde(with = "crate::serde_int::vec_vec")]
    pub rows: Vec<IntVec>,
    /// Irreducible elements found within the layer bound, sorted.
    #[serde(with = "crate::serde_int::vec_vec")]
    pub generators: Vec<IntVec>,
    /// True when no generator touched the boundary layer, a heuristic sign
    /// that the list is the complete generating set.
    pub complete: bool,
}

impl SectionSemigroup {
    pub fn dim(&self) -> usize {
        self.m_dim + self.rank
    }

    /// Exact membership test via the ray inequalities.
    pub fn contains(&self, x: &[Int]) -> bool {
        x.len() == self.dim() && self.rows.iter().all(|r| !dot(r, x).is_negative())
    }
}

/// One generating monomial of a quotient presentation: an exponent vector
/// over the ambient affine coordinates together with its class-group degree.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConoidCoordinate {
    #[serde(with = "crate::serde_int::vec")]
    pub exponent: IntVec,
    #[serde(with = "crate::serde_int::vec")]
    pub degree: IntVec,
}

/// Chart data of a quotient presentation. `vanishing` lists the ambient
/// affine coordinates that vanish at the chart's distinguished point;
/// `section` is the exponent vector (over the presentation's coordinates) of
/// an invariant monomial whose non-vanishing locus maps onto the chart.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConoidChart {
    pub cone: usize,
    pub vanishing: Vec<usize>,
    /// Order of the stabilizer of the distinguished point under the
    /// diagonalizable group of the presentation; `None` when infinite.
    #[serde(with = "crate::serde_int::opt")]
    pub stabilizer_order: Option<Int>,
    #[serde(with = "crate::serde_int::vec")]
    pub section: IntVec,
}

/// A presentation of the variety as a good quotient: the spectrum of the
/// monomial algebra generated by `coordinates` inside affine `variables`-
/// space, minus the locus where every chart section vanishes, divided by the
/// diagonalizable group dual to `class_group` acting through the degrees.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ConoidPresentation {
    pub variables: usize,
    pub class_group: FinAbGroup,
    pub coordinates: Vec<ConoidCoordinate>,
    pub charts: Vec<ConoidChart>,
    /// True when every stabilizer is trivial, so the group acts freely on
    /// the relevant locus.
    pub free: bool,
    /// True when the construction divided by a finite group, which relies on
    /// the base field having characteristic zero.
    pub char_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConoidError {
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
    #[error("expected one certificate per maximal cone, in cone order")]
    CertificateLayout,
    #[error("ample group fields have inconsistent shapes")]
    GroupShape,
    #[error("basis divisor classes are linearly dependent")]
    DependentBasis,
    #[error("basis divisor {0} does not have its recorded torsion-free class")]
    DegreeMismatch(usize),
    #[error("basis divisor {0} is not Cartier")]
    BasisNotCartier(usize),
    #[error("cover sections must list each maximal cone once, in cone order")]
    CoverLayout,
    #[error("cover section for cone {cone} has the wrong vanishing order at ray {ray}")]
    BadCover { cone: usize, ray: usize },
    #[error("grading is not pointed: the section ring has units of nonzero degree")]
    GradingNotPointed,
    #[error("section space in layer {0:?} is infinite")]
    UnboundedLayer(IntVec),
    #[error("generator enumeration hit the layer bound before stabilizing")]
    IncompleteSections,
    #[error("localized section {element:?} of chart {cone} leaves the chart semigroup")]
    SectionOffChart { cone: usize, element: IntVec },
    #[error("chart semigroup element {element:?} is missing from the localized sections of chart {cone}")]
    ChartSectionMissing { cone: usize, element: IntVec },
}

/// Order of the torsion part of a (reduced) class: the least t >= 1 such
/// that t times the element has zero torsion coordinates.
fn torsion_order(group: &FinAbGroup, elem: &[Int]) -> Int {
    let mut t = Int::one();
    for (i, d) in group.torsion.iter().enumerate() {
        let c = &elem[group.free_rank + i];
        t = t.lcm(&(d / d.gcd(c)));
    }
    t
}

/// Smallest d >= 1 with d*v in the lattice generated by `rows`, or `None`
/// when no multiple lies in it.
fn least_lattice_multiple(rows: &[IntVec], width: usize, v: &[Int]) -> Option<Int> {
    let mut m = IntMatrix::zero(width, rows.len() + 1);
    for (j, r) in rows.iter().enumerate() {
        for i in 0..width {
            m[(i, j)] = r[i].clone();
        }
    }
    for i in 0..width {
        m[(i, rows.len())] = -v[i].clone();
    }
    // Multiples d with d*v in the lattice form the projection of the kernel
    // to its last coordinate, a subgroup dZ.
    let ker = kernel_basis(&m);
    let mut d = Int::zero();
    for j in 0..ker.cols {
        d = d.gcd(&ker[(rows.len(), j)]);
    }
    if d.is_zero() {
        None
    } else {
        Some(d)
    }
}

/// Smallest multiple of a group element lying in the subgroup the generators
/// span; `None` when the element has infinite order modulo the subgroup.
fn least_multiple_in_subgroup(group: &FinAbGroup, gens: &[IntVec], elem: &[Int]) -> Option<Int> {
    let w = group.coords();
    if w == 0 {
        return Some(Int::one());
    }
    let mut rows: Vec<IntVec> = gens.to_vec();
    rows.extend(group.relation_vectors());
    least_lattice_multiple(&rows, w, elem)
}

/// Order of the subquotient <all>/<sub> inside the group; `None` when
/// infinite. The `sub` elements must lie in the subgroup spanned by `all`.
fn subquotient_order(group: &FinAbGroup, all: &[IntVec], sub: &[IntVec]) -> Option<Int> {
    let w = group.coords();
    if w == 0 {
        return Some(Int::one());
    }
    let mut rows_a: Vec<IntVec> = all.to_vec();
    rows_a.extend(group.relation_vectors());
    let basis_a = canonical_lattice_basis(rows_a, w);
    let mut rows_b: Vec<IntVec> = sub.to_vec();
    rows_b.extend(group.relation_vectors());
    let basis_b = canonical_lattice_basis(rows_b, w);
    if basis_a.is_empty() {
        return Some(Int::one());
    }
    let at = IntMatrix::from_rows_with_width(basis_a.clone(), w).transpose();
    let coords: Vec<IntVec> = basis_b
        .iter()
        .map(|row| solve_integer(&at, row).expect("sub lattice lies inside the full lattice"))
        .collect();
    let m = IntMatrix::from_rows_with_width(coords, basis_a.len()).transpose();
    cokernel(&m).group.order()
}

/// Writes `target` as a nonnegative integer combination of the `parts`
/// exponent vectors. Exhaustive backtracking in nondecreasing part order;
/// terminates because every part is nonzero with nonnegative entries.
fn decompose_exponent(target: &[Int], parts: &[IntVec]) -> Option<IntVec> {
    fn go(rest: &mut IntVec, parts: &[IntVec], from: usize, counts: &mut IntVec) -> bool {
        if is_zero_vec(rest) {
            return true;
        }
        for j in from..parts.len() {
            if rest.iter().zip(&parts[j]).all(|(r, p)| r >= p) {
                for (x, p) in rest.iter_mut().zip(&parts[j]) {
                    *x -= p;
                }
                counts[j] += 1;
                if go(rest, parts, j, counts) {
                    return true;
                }
                counts[j] -= 1;
                for (x, p) in rest.iter_mut().zip(&parts[j]) {
                    *x += p;
                }
            }
        }
        false
    }
    debug_assert!(parts.iter().all(|p| !is_zero_vec(p) && p.iter().all(|x| !x.is_negative())));
    let mut rest = target.to_vec();
    let mut counts = vec![Int::zero(); parts.len()];
    go(&mut rest, parts, 0, &mut counts).then_some(counts)
}

fn divisors_descending(n: u64) -> Vec<u64> {
    let mut ds = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            ds.push(i);
            if i != n / i {
                ds.push(n / i);
            }
        }
        i += 1;
    }
    ds.sort_unstable_by(|a, b| b.cmp(a));
    ds
}

/// Largest integral submultiple of the divisor that is still Cartier, with
/// freshly computed (hence canonical) local data.
fn primitive_cartier(fan: &ValidatedFan, cd: &CartierData) -> CartierData {
    let c = content(&cd.coeffs);
    match c.to_u64() {
        Some(cu) if cu > 1 => {
            for d in divisors_descending(cu) {
                if d == 1 {
                    break;
                }
                let di = Int::from(d);
                let scaled: IntVec = cd.coeffs.iter().map(|x| x / &di).collect();
                if let Ok(smaller) = cartier_data(fan, &WeilDivisor::new(scaled)) {
                    return smaller;
                }
            }
            cartier_data(fan, &WeilDivisor::new(cd.coeffs.clone()))
                .expect("input Cartier data stays Cartier")
        }
        _ => cd.clone(),
    }
}

/// Rescales every certificate divisor to its smallest Cartier submultiple.
/// Feasibility witnesses are only determined up to positive scaling, so raw
/// certificates are not canonical; normalizing first makes everything built
/// on top of them reproducible. Supports are unchanged, so the result is
/// again a valid certificate family.
pub fn normalize_certificates(
    fan: &ValidatedFan,
    certs: &[DivisorialCertificate],
) -> Result<Vec<DivisorialCertificate>, ConoidError> {
    let mut out = Vec::with_capacity(certs.len());
    for cert in certs {
        verify_divisorial_certificate(fan, cert)?;
        out.push(DivisorialCertificate {
            target_cone: cert.target_cone,
            cartier: primitive_cartier(fan, &cert.cartier),
        });
    }
    Ok(out)
}

/// Merges one divisoriality certificate per maximal cone into an
/// [`AmpleGroup`]: torsion parts of the classes are killed by passing to
/// multiples, the degree lattice is reduced according to `policy`, and for
/// every chart a cover section is solved for exactly.
pub fn build_ample_group(
    fan: &ValidatedFan,
    certs: &[DivisorialCertificate],
    policy: MergePolicy,
) -> Result<AmpleGroup, ConoidError> {
    if certs.len() != fan.n_max_cones()
        || certs.iter().enumerate().any(|(i, c)| c.target_cone != i)
    {
        return Err(ConoidError::CertificateLayout);
    }
    for cert in certs {
        verify_divisorial_certificate(fan, cert)?;
    }
    let cl = class_group(fan)?;
    let f = cl.group.free_rank;

    // Kill torsion: replace each certificate divisor by the smallest multiple
    // whose class is free. The support pattern survives scaling.
    let mut scaled_coeffs: Vec<IntVec> = Vec::new();
    let mut free_degrees: Vec<IntVec> = Vec::new();
    for cert in certs {
        let deg = cl.class_of(&cert.cartier.coeffs);
        let t = torsion_order(&cl.group, &deg);
        scaled_coeffs.push(vec_scale(&t, &cert.cartier.coeffs));
        free_degrees.push(vec_scale(&t, &deg[..f]));
    }

    let mut coeff_rows: Vec<IntVec> = Vec::new();
    let mut degrees: Vec<IntVec> = Vec::new();
    match policy {
        MergePolicy::MinimalRank => {
            let g = IntMatrix::from_rows_with_width(free_degrees.clone(), f);
            let (h, u) = hermite_normal_form(&g);
            for i in 0..h.rows {
                let row = h.row(i);
                if is_zero_vec(&row) {
                    continue;
                }
                let mut c = vec![Int::zero(); fan.n_rays()];
                for (j, sc) in scaled_coeffs.iter().enumerate() {
                    c = vec_add(&c, &vec_scale(&u[(i, j)], sc));
                }
                coeff_rows.push(c);
                degrees.push(row);
            }
        }
        MergePolicy::OnePerCone => {
            for j in 0..certs.len() {
                let mut trial = degrees.clone();
                trial.push(free_degrees[j].clone());
                if IntMatrix::from_rows_with_width(trial, f).rank() > degrees.len() {
                    degrees.push(free_degrees[j].clone());
                    coeff_rows.push(scaled_coeffs[j].clone());
                }
            }
        }
    }

    let basis: Vec<CartierData> = coeff_rows
        .iter()
        .map(|c| {
            cartier_data(fan, &WeilDivisor::new(c.clone()))
                .expect("integer combination of Cartier divisors is Cartier")
        })
        .collect();
    let s = basis.len();
    let deg_cols = IntMatrix::from_rows_with_width(degrees.clone(), f).transpose();
    let rays_mat = IntMatrix::from_rows_with_width(fan.rays().to_vec(), fan.rank());

    let mut cover = Vec::new();
    for j in 0..certs.len() {
        let (d, lambda) = if s == 0 {
            // Rank zero forces every certificate class to vanish.
            (Int::one(), vec![])
        } else {
            let d = least_lattice_multiple(&degrees, f, &free_degrees[j])
                .expect("certificate degrees lie in the span of the merged degrees");
            let target = vec_scale(&d, &free_degrees[j]);
            let lambda = solve_integer(&deg_cols, &target)
                .expect("multiple of the certificate degree lies in the degree lattice");
            (d, lambda)
        };
        let mut e = vec_scale(&d, &scaled_coeffs[j]);
        for (li, b) in lambda.iter().zip(&basis) {
            e = vec_sub(&e, &vec_scale(li, &b.coeffs));
        }
        let numerator = solve_integer(&rays_mat, &e).expect("divisor of class zero is principal");
        cover.push(CoverSection { cone: j, numerator, lambda });
    }
    Ok(AmpleGroup { basis, degrees, cover })
}

/// Re-checks every invariant of an [`AmpleGroup`] from scratch: basis
/// divisors are Cartier with the recorded independent torsion-free classes,
/// and each cover section's divisor vanishes exactly on its chart rays and is
/// supported (with multiplicity at least one) on all other rays.
pub fn verify_ample_group(fan: &ValidatedFan, ag: &AmpleGroup) -> Result<(), ConoidError> {
    let cl = class_group(fan)?;
    let f = cl.group.free_rank;
    if ag.degrees.len() != ag.basis.len() {
        return Err(ConoidError::GroupShape);
    }
    for (i, b) in ag.basis.iter().enumerate() {
        if !verify_cartier(fan, b) {
            return Err(ConoidError::BasisNotCartier(i));
        }
        let cls = cl.class_of(&b.coeffs);
        if ag.degrees[i].len() != f
            || cls[..f] != ag.degrees[i][..]
            || cls[f..].iter().any(|x| !x.is_zero())
        {
            return Err(ConoidError::DegreeMismatch(i));
        }
    }
    let s = ag.basis.len();
    if IntMatrix::from_rows_with_width(ag.degrees.clone(), f).rank() != s {
        return Err(ConoidError::DependentBasis);
    }
    if ag.cover.len() != fan.n_max_cones()
        || ag.cover.iter().enumerate().any(|(k, cs)| {
            cs.cone != k || cs.numerator.len() != fan.rank() || cs.lambda.len() != s
        })
    {
        return Err(ConoidError::CoverLayout);
    }
    for cs in &ag.cover {
        let chart = fan.max_ray_set(cs.cone);
        for rho in 0..fan.n_rays() {
            let mut c = dot(&cs.numerator, &fan.rays()[rho]);
            for (li, b) in cs.lambda.iter().zip(&ag.basis) {
                c += li * &b.coeffs[rho];
            }
            let ok = if chart.contains(&rho) { c.is_zero() } else { c >= Int::one() };
            if !ok {
                return Err(ConoidError::BadCover { cone: cs.cone, ray: rho });
            }
        }
    }
    Ok(())
}

/// Enumerates the generators of the multigraded section semigroup of the
/// group's basis divisors (the cover plays no role here). Layers run over
/// all lambda with sup-norm at most `bound`; irreducibility of each element
/// is decided exactly against the full semigroup, so the bound only limits
/// which candidates are seen. Finite layers require the rays to positively
/// span (every section space of a non-complete support is infinite).
pub fn section_semigroup(
    fan: &ValidatedFan,
    ag: &AmpleGroup,
    bound: u32,
) -> Result<SectionSemigroup, ConoidError> {
    assert!(bound >= 1, "layer bound must be positive");
    let d = fan.rank();
    let r = ag.basis.len();
    let mut rows: Vec<IntVec> = Vec::new();
    for (rho, v) in fan.rays().iter().enumerate() {
        let mut row = v.clone();
        for b in &ag.basis {
            row.push(b.coeffs[rho].clone());
        }
        rows.push(row);
    }
    if r == 0 {
        // Trivial grading: the semigroup is the common chart semigroup.
        let cone = Cone::from_ineqs(d, rows.clone());
        let generators = semigroup_generators(&cone);
        return Ok(SectionSemigroup { m_dim: d, rank: 0, rows, generators, complete: true });
    }
    if IntMatrix::from_rows_with_width(rows.clone(), d + r).rank() != d + r {
        return Err(ConoidError::GradingNotPointed);
    }
    let b = Int::from(bound);
    let lambdas = box_lattice_points(&vec![-b.clone(); r], &vec![b.clone(); r]);
    let layers = par_map(&lambdas, |lam| {
        let shift = ag.layer_coeffs(lam);
        let ineqs: Vec<(IntVec, Int)> = fan.rays().iter().cloned().zip(shift).collect();
        match polytope_points(&ineqs) {
            Ok(pts) => Ok(pts
                .into_iter()
                .map(|mut u| {
                    u.extend(lam.iter().cloned());
                    u
                })
                .filter(|x| !is_zero_vec(x))
                .collect::<Vec<IntVec>>()),
            Err(PolytopeError::Unbounded(_)) => Err(ConoidError::UnboundedLayer(lam.clone())),
        }
    });
    let mut elements: Vec<IntVec> = Vec::new();
    for layer in layers {
        elements.extend(layer?);
    }
    // x is a generator iff the order interval C cap (x - C) holds no lattice
    // point besides 0 and x. The interval is bounded because C is pointed.
    let flags = par_map(&elements, |x| {
        let mut ineqs: Vec<(IntVec, Int)> = Vec::with_capacity(2 * rows.len());
        for row in &rows {
            ineqs.push((row.clone(), Int::zero()));
            ineqs.push((crate::arith::vec_neg(row), dot(row, x)));
        }
        let pts =
            polytope_points(&ineqs).expect("order interval of a pointed cone is bounded");
        pts.len() <= 2
    });
    let mut generators: Vec<IntVec> = elements
        .into_iter()
        .zip(flags)
        .filter_map(|(x, irreducible)| irreducible.then_some(x))
        .collect();
    generators.sort_by(|x, y| lex_cmp(x, y));
    let complete = !generators.iter().any(|g| g[d..].iter().any(|c| c.abs() == b));
    Ok(SectionSemigroup { m_dim: d, rank: r, rows, generators, complete })
}

/// Checks that inverting the canonical section of a certificate divisor
/// localizes the graded section semigroup onto the chart semigroup of the
/// target cone, by generator containment in both directions: numerators of
/// graded generators are regular on the chart, and every chart semigroup
/// generator reappears after clearing with an explicit power of the section.
pub fn localization_identity(
    fan: &ValidatedFan,
    cert: &DivisorialCertificate,
    bound: u32,
) -> Result<(), ConoidError> {
    verify_divisorial_certificate(fan, cert)?;
    let coeffs = &cert.cartier.coeffs;
    if coeffs.iter().all(|c| c.is_zero()) {
        // Zero divisor: the chart is the whole variety and localizing by the
        // constant section changes nothing.
        return Ok(());
    }
    let cl = class_group(fan)?;
    let f = cl.group.free_rank;
    let deg = cl.class_of(coeffs);
    let t = torsion_order(&cl.group, &deg);
    let g = vec_scale(&t, &deg[..f]);
    if is_zero_vec(&g) {
        // Some multiple of the divisor is principal, so the graded ring has a
        // unit of nonzero degree and no pointed layer structure.
        return Err(ConoidError::GradingNotPointed);
    }
    let scaled = vec_scale(&t, coeffs);
    let basis = cartier_data(fan, &WeilDivisor::new(scaled.clone()))
        .expect("multiple of a Cartier divisor is Cartier");
    let carrier = AmpleGroup { basis: vec![basis], degrees: vec![g], cover: vec![] };
    let ss = section_semigroup(fan, &carrier, bound)?;
    if !ss.complete {
        return Err(ConoidError::IncompleteSections);
    }
    let target = cert.target_cone;
    let chart = fan.max_ray_set(target);
    let d = fan.rank();
    // Localized generators stay regular on the chart: their numerators must
    // already lie in the chart semigroup cone.
    for gen in &ss.generators {
        let u = &gen[..d];
        if chart.iter().any(|&rho| dot(u, &fan.rays()[rho]).is_negative()) {
            return Err(ConoidError::SectionOffChart { cone: target, element: u.to_vec() });
        }
    }
    // Conversely every chart monomial, cleared by an explicit power of the
    // canonical section, is a global section of that power of the divisor.
    for h in fan.chart_semigroup(fan.max_cone(target)) {
        let mut n = Int::zero();
        for rho in 0..fan.n_rays() {
            if chart.contains(&rho) {
                continue;
            }
            let need = ceil_div(&-dot(&h, &fan.rays()[rho]), &scaled[rho]);
            if need > n {
                n = need;
            }
        }
        let mut x = h.clone();
        x.push(n);
        if !ss.contains(&x) {
            return Err(ConoidError::ChartSectionMissing { cone: target, element: h });
        }
    }
    // The canonical section itself lives in layer one.
    let mut one = vec![Int::zero(); d];
    one.push(Int::one());
    if !ss.contains(&one) {
        return Err(ConoidError::ChartSectionMissing { cone: target, element: one });
    }
    Ok(())
}

/// The classical quotient presentation: one affine coordinate per ray graded
/// by its divisor class, chart sections the complementary ray monomials, and
/// the lifted fan replacing each cone by the face of the positive orthant on
/// the same ray indices. The lifted fan is returned raw because its cones are
/// orthant faces whose validity is forced by the input fan; validating it is
/// only feasible for small ray counts.
pub fn cox_presentation(fan: &ValidatedFan) -> Result<(ConoidPresentation, Fan), ConoidError> {
    let cl = class_group(fan)?;
    let n = fan.n_rays();
    let unit = |i: usize| {
        let mut e = vec![Int::zero(); n];
        e[i] = Int::one();
        e
    };
    let coordinates: Vec<ConoidCoordinate> = (0..n)
        .map(|rho| ConoidCoordinate { exponent: unit(rho), degree: cl.ray_class(rho) })
        .collect();
    let all_degrees: Vec<IntVec> = coordinates.iter().map(|c| c.degree.clone()).collect();
    let mut charts = Vec::new();
    for ci in 0..fan.n_max_cones() {
        let on_chart = fan.max_ray_set(ci);
        let vanishing: Vec<usize> = on_chart.iter().copied().collect();
        let alive: Vec<IntVec> = (0..n)
            .filter(|rho| !on_chart.contains(rho))
            .map(|rho| all_degrees[rho].clone())
            .collect();
        let stabilizer_order = subquotient_order(&cl.group, &all_degrees, &alive);
        let mut section = vec![Int::zero(); n];
        for rho in 0..n {
            if !on_chart.contains(&rho) {
                section[rho] = Int::one();
            }
        }
        charts.push(ConoidChart { cone: ci, vanishing, stabilizer_order, section });
    }
    let free = charts.iter().all(|c| c.stabilizer_order.as_ref().is_some_and(|o| o.is_one()));
    let lifted = Fan {
        rank: n,
        rays: (0..n).map(unit).collect(),
        max_cones: (0..fan.n_max_cones())
            .map(|ci| fan.max_ray_set(ci).iter().copied().collect())
            .collect(),
    };
    let presentation = ConoidPresentation {
        variables: n,
        class_group: cl.group,
        coordinates,
        charts,
        free,
        char_zero: false,
    };
    Ok((presentation, lifted))
}

/// Removes finite stabilizers from a presentation by dividing out the finite
/// group acting trivially on no chart: the coordinates are replaced by the
/// minimal generating monomials whose degrees lie in the common invariant
/// grading subgroup. Requires every chart stabilizer to be finite. The
/// resulting stabilizers are trivial and the construction is idempotent.
pub fn finite_group_quotient(cp: &ConoidPresentation) -> ConoidPresentation {
    for ch in &cp.charts {
        assert!(
            ch.stabilizer_order.is_some(),
            "finite quotient requires finite chart stabilizers"
        );
    }
    if cp.free {
        return cp.clone();
    }
    let group = &cp.class_group;
    let w = group.coords();
    let k = cp.coordinates.len();
    let alive_on = |vanishing: &[usize], exponent: &IntVec| {
        exponent
            .iter()
            .enumerate()
            .all(|(v, e)| e.is_zero() || !vanishing.contains(&v))
    };
    let alive_sets: Vec<Vec<usize>> = cp
        .charts
        .iter()
        .map(|ch| {
            (0..k).filter(|&j| alive_on(&ch.vanishing, &cp.coordinates[j].exponent)).collect()
        })
        .collect();
    // The invariant grading subgroup: degrees realized on every chart by
    // monomials in the coordinates alive there.
    let mut kg: Vec<IntVec> =
        alive_sets[0].iter().map(|&j| cp.coordinates[j].degree.clone()).collect();
    for aset in &alive_sets[1..] {
        let degs: Vec<IntVec> = aset.iter().map(|&j| cp.coordinates[j].degree.clone()).collect();
        kg = group.subgroup_intersection(&kg, &degs);
    }
    let dmat = {
        let rows: Vec<IntVec> = cp.coordinates.iter().map(|c| c.degree.clone()).collect();
        IntMatrix::from_rows_with_width(rows, w).transpose()
    };
    let ex = {
        let rows: Vec<IntVec> = cp.coordinates.iter().map(|c| c.exponent.clone()).collect();
        IntMatrix::from_rows_with_width(rows, cp.variables).transpose()
    };
    // Lattice of coordinate exponents with invariant degree; it has finite
    // index, so its nonnegative part spans a full-dimensional cone whose
    // Hilbert basis generates the invariant monomial algebra.
    let mut target = kg.clone();
    target.extend(group.relation_vectors());
    let e_rows = preimage_lattice(&dmat, target);
    debug_assert_eq!(e_rows.len(), k);
    let bmat = IntMatrix::from_rows_with_width(e_rows, k);
    let y_ineqs: Vec<IntVec> = (0..k).map(|j| bmat.col(j)).collect();
    let hb = semigroup_generators(&Cone::from_ineqs(k, y_ineqs));
    let bt = bmat.transpose();
    let betas: Vec<IntVec> = hb.iter().map(|y| bt.mul_vec(y)).collect();
    let mut coordinates: Vec<ConoidCoordinate> = betas
        .iter()
        .map(|beta| ConoidCoordinate {
            exponent: ex.mul_vec(beta),
            degree: group.reduce(dmat.mul_vec(beta)),
        })
        .collect();
    coordinates.sort_by(|a, b| lex_cmp(&a.exponent, &b.exponent));
    let new_degrees: Vec<IntVec> = coordinates.iter().map(|c| c.degree.clone()).collect();
    let parts: Vec<IntVec> = coordinates.iter().map(|c| c.exponent.clone()).collect();

    let mut charts = Vec::new();
    for (ci, ch) in cp.charts.iter().enumerate() {
        let alive_new: Vec<IntVec> = coordinates
            .iter()
            .filter(|c| alive_on(&ch.vanishing, &c.exponent))
            .map(|c| c.degree.clone())
            .collect();
        let stabilizer_order = subquotient_order(group, &new_degrees, &alive_new);
        // Chart section: the smallest invariant power of the product of the
        // coordinates alive on the chart, decomposed over the generators.
        let mut ind = vec![Int::zero(); k];
        for &j in &alive_sets[ci] {
            ind[j] = Int::one();
        }
        let n_mult = least_multiple_in_subgroup(group, &kg, &group.reduce(dmat.mul_vec(&ind)))
            .expect("finite stabilizers make a power of the chart monomial invariant");
        let target_var = ex.mul_vec(&vec_scale(&n_mult, &ind));
        let section = decompose_exponent(&target_var, &parts)
            .expect("invariant chart monomials decompose over the generators");
        charts.push(ConoidChart {
            cone: ch.cone,
            vanishing: ch.vanishing.clone(),
            stabilizer_order,
            section,
        });
    }
    let free = charts.iter().all(|c| c.stabilizer_order.as_ref().is_some_and(|o| o.is_one()));
    ConoidPresentation {
        variables: cp.variables,
        class_group: group.clone(),
        coordinates,
        charts,
        free,
        char_zero: true,
    }
}

/// All binomial relations among the given exponent vectors up to the total
/// degree bound: pairs of distinct monomials in the generators, with disjoint
/// support, mapping to the same exponent. Each pair is listed once with the
/// lexicographically smaller side first. Exhaustive over (bound+1)^k
/// monomials, so it is meant for small generator counts.
pub fn binomial_relations(exponents: &[IntVec], bound: u32) -> Vec<(IntVec, IntVec)> {
    let k = exponents.len();
    if k == 0 {
        return vec![];
    }
    let lo = vec![Int::zero(); k];
    let hi = vec![Int::from(bound); k];
    assert!(
        box_volume(&lo, &hi).is_some_and(|v| v <= 5_000_000),
        "relation search space too large"
    );
    let total = Int::from(bound);
    let emat =
        IntMatrix::from_rows_with_width(exponents.to_vec(), exponents[0].len()).transpose();
    let mut by_image: BTreeMap<IntVec, Vec<IntVec>> = BTreeMap::new();
    for m in box_lattice_points(&lo, &hi) {
        if is_zero_vec(&m) || m.iter().sum::<Int>() > total {
            continue;
        }
        by_image.entry(emat.mul_vec(&m)).or_default().push(m);
    }
    let mut out = Vec::new();
    for monomials in by_image.values() {
        for (i, a) in monomials.iter().enumerate() {
            for b in &monomials[i + 1..] {
                if a.iter().zip(b).all(|(x, y)| x.is_zero() || y.is_zero()) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
    }
    out.sort();
    out
}
