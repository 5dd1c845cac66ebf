//! Torus-invariant divisors: class groups, Cartier data, section polytopes,
//! and the divisoriality decision with re-verifiable certificates.
//!
//! A variety is divisorial when every point has an affine neighbourhood of
//! the form X minus the support of an effective Cartier divisor. For toric
//! inputs invariant divisors suffice, which turns the question into one exact
//! rational feasibility problem per maximal cone: find a Cartier divisor
//! vanishing exactly off that cone's rays.

use crate::arith::{clear_denoms, dot, rat, Int, IntVec, Rat};
use crate::fan::ValidatedFan;
use crate::hilbert::{polytope_points, polytope_points_boxed, PolytopeError};
use crate::lattice::{cokernel, solve_integer, FinAbGroup, IntMatrix};
use crate::lp::{lp_feasible, LinConstraint, Rel};
use num::{One, Signed, Zero};

/// Invariant Weil divisor sum a_rho D_rho, coefficients in fan ray order.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct WeilDivisor {
    #[serde(with = "crate::serde_int::vec")]
    pub coeffs: IntVec,
}

impl WeilDivisor {
    pub fn new(coeffs: IntVec) -> Self {
        WeilDivisor { coeffs }
    }

    pub fn zero(n_rays: usize) -> Self {
        WeilDivisor { coeffs: vec![Int::zero(); n_rays] }
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|a| !a.is_negative())
    }
}

/// A Cartier divisor: the Weil coefficients plus one local functional per
/// maximal cone with m_sigma(v_rho) = -a_rho on the cone's rays.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct CartierData {
    #[serde(with = "crate::serde_int::vec")]
    pub coeffs: IntVec,
    #[serde(with = "crate::serde_int::vec_vec")]
    pub local_data: Vec<IntVec>,
}

/// Class group of the variety with the projection sending a ray-coefficient
/// vector to its divisor class.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub group: FinAbGroup,
    pub degree_map: IntMatrix,
}

impl ClassGroup {
    /// Class of a coefficient vector.
    pub fn class_of(&self, coeffs: &[Int]) -> IntVec {
        self.group.reduce(self.degree_map.mul_vec(coeffs))
    }

    /// Class of the prime divisor attached to one ray.
    pub fn ray_class(&self, ray: usize) -> IntVec {
        let mut e = vec![Int::zero(); self.degree_map.cols];
        e[ray] = Int::one();
        self.class_of(&e)
    }

    pub fn ray_classes(&self) -> Vec<IntVec> {
        (0..self.degree_map.cols).map(|i| self.ray_class(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DivisorError {
    #[error("rays span a sublattice of rank {span}, expected {rank}")]
    Span { rank: usize, span: usize },
    #[error("divisor has {got} coefficients for a fan with {expected} rays")]
    CoeffLength { got: usize, expected: usize },
    #[error("no integral local functional exists on maximal cone {0}")]
    NotCartier(usize),
    #[error("section polytope is unbounded (direction {0:?}); supply a box bound")]
    Unbounded(IntVec),
    #[error("chart system for maximal cone {0} is infeasible")]
    NotDivisorial(usize),
}

fn check_len(fan: &ValidatedFan, d: &WeilDivisor) -> Result<(), DivisorError> {
    if d.coeffs.len() != fan.n_rays() {
        return Err(DivisorError::CoeffLength { got: d.coeffs.len(), expected: fan.n_rays() });
    }
    Ok(())
}

/// Divisor of the character with exponent u: coefficients <u, v_rho>.
pub fn principal_divisor(fan: &ValidatedFan, u: &[Int]) -> WeilDivisor {
    WeilDivisor::new(fan.rays().iter().map(|v| dot(u, v)).collect())
}

/// Class group as the cokernel of u -> (<u, v_rho>)_rho. Requires the rays
/// to span the ambient lattice rationally.
pub fn class_group(fan: &ValidatedFan) -> Result<ClassGroup, DivisorError> {
    let a = IntMatrix::from_rows_with_width(fan.rays().to_vec(), fan.rank());
    let span = a.rank();
    if span != fan.rank() {
        return Err(DivisorError::Span { rank: fan.rank(), span });
    }
    let ck = cokernel(&a);
    Ok(ClassGroup { group: ck.group, degree_map: ck.projection })
}

/// Local functionals for a Cartier divisor, or the lowest-index maximal cone
/// where no integral functional exists.
pub fn cartier_data(fan: &ValidatedFan, d: &WeilDivisor) -> Result<CartierData, DivisorError> {
    check_len(fan, d)?;
    let mut local = Vec::new();
    for ci in 0..fan.n_max_cones() {
        let idx: Vec<usize> = fan.max_ray_set(ci).iter().copied().collect();
        let rows: Vec<IntVec> = idx.iter().map(|&r| fan.rays()[r].clone()).collect();
        let rhs: IntVec = idx.iter().map(|&r| -d.coeffs[r].clone()).collect();
        let a = IntMatrix::from_rows_with_width(rows, fan.rank());
        match solve_integer(&a, &rhs) {
            Some(m) => local.push(m),
            None => return Err(DivisorError::NotCartier(ci)),
        }
    }
    Ok(CartierData { coeffs: d.coeffs.clone(), local_data: local })
}

/// Checks the defining equations m_sigma(v_rho) = -a_rho on every maximal
/// cone (which also forces agreement on shared faces).
pub fn verify_cartier(fan: &ValidatedFan, cd: &CartierData) -> bool {
    cd.coeffs.len() == fan.n_rays()
        && cd.local_data.len() == fan.n_max_cones()
        && (0..fan.n_max_cones()).all(|ci| {
            fan.max_ray_set(ci)
                .iter()
                .all(|&r| dot(&cd.local_data[ci], &fan.rays()[r]) == -cd.coeffs[r].clone())
        })
}

/// Lattice points of {u : <u, v_rho> >= -a_rho}; the monomial sections of the
/// divisor's sheaf. `complete` is false when a box bound truncated the list.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SectionPolytope {
    #[serde(with = "crate::serde_int::vec_vec")]
    pub points: Vec<IntVec>,
    pub complete: bool,
}

pub fn global_sections(
    fan: &ValidatedFan,
    d: &WeilDivisor,
    box_bound: Option<&Int>,
) -> Result<SectionPolytope, DivisorError> {
    check_len(fan, d)?;
    let ineqs: Vec<(IntVec, Int)> = fan
        .rays()
        .iter()
        .zip(&d.coeffs)
        .map(|(v, a)| (v.clone(), a.clone()))
        .collect();
    match polytope_points(&ineqs) {
        Ok(points) => Ok(SectionPolytope { points, complete: true }),
        Err(PolytopeError::Unbounded(dir)) => match box_bound {
            None => Err(DivisorError::Unbounded(dir)),
            Some(b) => {
                let lo = vec![-b.clone(); fan.rank()];
                let hi = vec![b.clone(); fan.rank()];
                Ok(SectionPolytope { points: polytope_points_boxed(&ineqs, &lo, &hi), complete: false })
            }
        },
    }
}

/// One divisoriality certificate: an effective Cartier divisor whose support
/// is exactly the rays outside the target cone, so its complement is that
/// cone's affine chart.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct DivisorialCertificate {
    pub target_cone: usize,
    pub cartier: CartierData,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("certificate for cone {cone}: ray {ray} of the cone has nonzero coefficient")]
    NonzeroOnChart { cone: usize, ray: usize },
    #[error("certificate for cone {cone}: ray {ray} off the cone has coefficient < 1")]
    NotSupportedOffChart { cone: usize, ray: usize },
    #[error("certificate for cone {cone}: local functional mismatch at cone {at} ray {ray}")]
    LocalMismatch { cone: usize, at: usize, ray: usize },
    #[error("certificate shape does not match the fan")]
    Shape,
}

pub fn verify_divisorial_certificate(
    fan: &ValidatedFan,
    cert: &DivisorialCertificate,
) -> Result<(), CertificateError> {
    let cd = &cert.cartier;
    if cd.coeffs.len() != fan.n_rays()
        || cd.local_data.len() != fan.n_max_cones()
        || cert.target_cone >= fan.n_max_cones()
    {
        return Err(CertificateError::Shape);
    }
    let chart = fan.max_ray_set(cert.target_cone);
    for r in 0..fan.n_rays() {
        if chart.contains(&r) {
            if !cd.coeffs[r].is_zero() {
                return Err(CertificateError::NonzeroOnChart { cone: cert.target_cone, ray: r });
            }
        } else if cd.coeffs[r] < Int::one() {
            return Err(CertificateError::NotSupportedOffChart { cone: cert.target_cone, ray: r });
        }
    }
    for ci in 0..fan.n_max_cones() {
        for &r in fan.max_ray_set(ci) {
            if dot(&cd.local_data[ci], &fan.rays()[r]) != -cd.coeffs[r].clone() {
                return Err(CertificateError::LocalMismatch { cone: cert.target_cone, at: ci, ray: r });
            }
        }
    }
    Ok(())
}

/// Per-cone feasibility system: find rational local functionals m_tau, one
/// per maximal cone, gluing to a Cartier divisor that vanishes on the target
/// cone's rays and has coefficient >= 1 on every other ray.
fn chart_divisor_system(fan: &ValidatedFan, target: usize) -> Vec<LinConstraint> {
    let var = |tau: usize, d: usize| format!("m{tau:03}_{d:02}");
    let mut sys = Vec::new();
    let n_max = fan.n_max_cones();
    let chart = fan.max_ray_set(target);
    for tau in 0..n_max {
        for &r in fan.max_ray_set(tau) {
            let coeffs: Vec<(String, Rat)> = (0..fan.rank())
                .map(|d| (var(tau, d), Rat::from(fan.rays()[r][d].clone())))
                .collect();
            if chart.contains(&r) {
                sys.push(LinConstraint::new(coeffs, Rel::Eq, Rat::zero()));
            } else {
                sys.push(LinConstraint::new(coeffs, Rel::Le, rat(-1, 1)));
            }
        }
    }
    // Shared rays must receive one well-defined coefficient.
    for t1 in 0..n_max {
        for t2 in t1 + 1..n_max {
            for &r in fan.max_ray_set(t1).intersection(fan.max_ray_set(t2)) {
                let mut coeffs: Vec<(String, Rat)> = (0..fan.rank())
                    .map(|d| (var(t1, d), Rat::from(fan.rays()[r][d].clone())))
                    .collect();
                coeffs.extend(
                    (0..fan.rank()).map(|d| (var(t2, d), Rat::from(-fan.rays()[r][d].clone()))),
                );
                sys.push(LinConstraint::new(coeffs, Rel::Eq, Rat::zero()));
            }
        }
    }
    sys
}

fn certificate_from_witness(
    fan: &ValidatedFan,
    target: usize,
    witness: &std::collections::BTreeMap<String, Rat>,
) -> DivisorialCertificate {
    let var = |tau: usize, d: usize| format!("m{tau:03}_{d:02}");
    let rational: Vec<Vec<Rat>> = (0..fan.n_max_cones())
        .map(|tau| {
            (0..fan.rank())
                .map(|d| witness.get(&var(tau, d)).cloned().unwrap_or_else(Rat::zero))
                .collect()
        })
        .collect();
    // The system is homogeneous except for the <= -1 thresholds, which only
    // improve under scaling by a positive integer, so clearing denominators
    // keeps every constraint satisfied.
    let flat: Vec<Rat> = rational.iter().flatten().cloned().collect();
    let scale = crate::arith::denom_lcm(&flat);
    let local_data: Vec<IntVec> = rational
        .iter()
        .map(|row| clear_denoms(&row.iter().map(|x| x * Rat::from(scale.clone())).collect::<Vec<_>>()))
        .collect();
    let mut coeffs = vec![Int::zero(); fan.n_rays()];
    for tau in 0..fan.n_max_cones() {
        for &r in fan.max_ray_set(tau) {
            coeffs[r] = -dot(&local_data[tau], &fan.rays()[r]);
        }
    }
    DivisorialCertificate {
        target_cone: target,
        cartier: CartierData { coeffs, local_data },
    }
}

/// Decides divisoriality: one certificate per maximal cone, or the lowest
/// failing cone. Per-cone systems are independent and evaluated in parallel.
pub fn is_divisorial(fan: &ValidatedFan) -> Result<Vec<DivisorialCertificate>, DivisorError> {
    let targets: Vec<usize> = (0..fan.n_max_cones()).collect();
    let results = crate::par::par_map(&targets, |&t| {
        lp_feasible(&chart_divisor_system(fan, t)).map(|w| certificate_from_witness(fan, t, &w))
    });
    let mut certs = Vec::new();
    for (t, r) in results.into_iter().enumerate() {
        match r {
            Some(c) => certs.push(c),
            None => return Err(DivisorError::NotDivisorial(t)),
        }
    }
    Ok(certs)
}

/// Status of the bounded k-divisoriality decision.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum KDivisorialStatus {
    Yes(KDivCertificate),
    No { witness_cone: usize },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum KDivCertificate {
    /// The variety itself is affine (single maximal cone).
    Affine,
    /// k = 2 on a simplicial fan: affine pair-neighbourhoods always exist.
    Simplicial,
    /// k = 1: the divisoriality certificates themselves.
    Divisorial(Vec<DivisorialCertificate>),
    /// A strictly convex Cartier divisor (ample on a complete fan), plus one
    /// demonstration section per tuple of distinguished points: the sum of
    /// the local vertex monomials, which is nonzero at each tuple point.
    Ample { cartier: CartierData, demonstrations: Vec<Demonstration> },
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Demonstration {
    /// Maximal-cone indices of the distinguished points covered.
    pub max_cones: Vec<usize>,
    /// Exponents of the monomials of the section, one per covered point.
    #[serde(with = "crate::serde_int::vec_vec")]
    pub section_terms: Vec<IntVec>,
}

/// Strict convexity of Cartier data on a complete fan: away from its own
/// cone, each local functional is strictly above the divisor bound.
pub fn is_strictly_convex(fan: &ValidatedFan, cd: &CartierData) -> bool {
    (0..fan.n_max_cones()).all(|ci| {
        (0..fan.n_rays())
            .filter(|r| !fan.max_ray_set(ci).contains(r))
            .all(|r| dot(&cd.local_data[ci], &fan.rays()[r]) > -cd.coeffs[r].clone())
    })
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

/// Bounded decision procedure for "every k points lie in a common affine
/// open". NO is exact (it already fails for single points). YES certificates:
/// affine, the simplicial k = 2 criterion, or an ample divisor found by
/// searching coefficient vectors up to `coeff_bound` (sound because an ample
/// divisor makes the variety projective). Everything else is UNKNOWN.
pub fn k_divisorial_status(fan: &ValidatedFan, k: usize, coeff_bound: u32) -> KDivisorialStatus {
    assert!(k >= 1);
    let certs = match is_divisorial(fan) {
        Ok(c) => c,
        Err(DivisorError::NotDivisorial(t)) => return KDivisorialStatus::No { witness_cone: t },
        Err(_) => unreachable!("is_divisorial only fails with NotDivisorial"),
    };
    if k == 1 {
        return KDivisorialStatus::Yes(KDivCertificate::Divisorial(certs));
    }
    if fan.n_max_cones() == 1 {
        return KDivisorialStatus::Yes(KDivCertificate::Affine);
    }
    if k == 2 && fan.props().simplicial {
        return KDivisorialStatus::Yes(KDivCertificate::Simplicial);
    }
    if !fan.props().complete {
        return KDivisorialStatus::Unknown;
    }
    let tuple_size = k.min(fan.n_max_cones());
    if tuple_size > 4 {
        // Demonstration sections would exceed the supported monomial count.
        return KDivisorialStatus::Unknown;
    }
    let lo = vec![Int::zero(); fan.n_rays()];
    let hi = vec![Int::from(coeff_bound); fan.n_rays()];
    for coeffs in crate::hilbert::box_lattice_points(&lo, &hi) {
        if coeffs.iter().all(|a| a.is_zero()) {
            continue;
        }
        let Ok(cd) = cartier_data(fan, &WeilDivisor::new(coeffs)) else { continue };
        if !is_strictly_convex(fan, &cd) {
            continue;
        }
        let demonstrations = combinations(fan.n_max_cones(), tuple_size)
            .into_iter()
            .map(|tuple| Demonstration {
                section_terms: tuple.iter().map(|&ci| cd.local_data[ci].clone()).collect(),
                max_cones: tuple,
            })
            .collect();
        return KDivisorialStatus::Yes(KDivCertificate::Ample { cartier: cd, demonstrations });
    }
    KDivisorialStatus::Unknown
}
