//! Quotient presentations with orthant-face charts, and the pipeline that
//! embeds a divisorial toric variety as a closed subvariety of a smooth
//! ambient quotient.
//!
//! A [`QuotientPresentation`] describes a toric (pre)variety as a quotient of
//! an open union of orthant-face charts of affine n-space by the
//! diagonalizable group dual to its grading group. [`build_embedding`] runs
//! the full construction: divisoriality certificates, merged divisor group,
//! graded section generators, then an ambient presentation on one coordinate
//! per generator, enlarged chart by chart inside the free locus while
//! separatedness (and for larger k, the common-chart certificate) is
//! preserved. Every artifact carries an arithmetic transcript which
//! [`verify_closed_embedding`] re-checks without repeating any search.

use crate::arith::{ceil_div, dot, is_zero_vec, lex_cmp, vec_sub, Int, IntVec};
use crate::cone::Cone;
use crate::conoid::{
    build_ample_group, normalize_certificates, section_semigroup, verify_ample_group, AmpleGroup,
    ConoidError, MergePolicy, SectionSemigroup,
};
use crate::divisor::{class_group, is_divisorial, DivisorError};
use crate::fan::{Fan, FanError, ValidatedFan};
use crate::lattice::{kernel_basis, lattice_eq, preimage_lattice, FinAbGroup, IntMatrix};
use num::{Signed, Zero};

/// A toric (pre)variety presented as a quotient: affine `n`-space carries the
/// diagonalizable group dual to `class_group` acting through the coordinate
/// `degrees`; `q` projects the big torus onto the quotient torus; `cones`
/// lists the orthant faces (as strictly increasing index sets, the
/// coordinates vanishing on the chart's closed orbit) whose chart quotients
/// glue to the variety.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct QuotientPresentation {
    pub n: usize,
    pub class_group: FinAbGroup,
    #[serde(with = "crate::serde_int::vec_vec")]
    pub degrees: Vec<IntVec>,
    /// Rows form a basis of the kernel of the degree map; column j is the
    /// image of the j-th coordinate cocharacter in the quotient lattice.
    #[serde(with = "crate::serde_int::vec_vec")]
    pub q: Vec<IntVec>,
    pub cones: Vec<Vec<usize>>,
}

impl QuotientPresentation {
    /// Rank of the quotient cocharacter lattice.
    pub fn rank(&self) -> usize {
        self.q.len()
    }

    /// Image of the j-th coordinate cocharacter.
    pub fn column(&self, j: usize) -> IntVec {
        self.q.iter().map(|row| row[j].clone()).collect()
    }

    /// Image cone of an orthant face under the projection.
    pub fn image_cone(&self, face: &[usize]) -> Cone {
        Cone::from_gens(self.rank(), face.iter().map(|&j| self.column(j)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Separatedness {
    Separated,
    /// First failing face pair in family order; an equal pair means that
    /// face's image cone is not strongly convex.
    NotSeparated { first: Vec<usize>, second: Vec<usize> },
}

/// Arithmetic witness that one source chart's coordinate ring is covered by
/// ambient coordinates: `clearing` decomposes the chart's nonvanishing cover
/// monomial over the generators, and each chart-semigroup element h is
/// reached as a generator combination of (h, 0) plus `power` copies of the
/// cover monomial.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ChartCheck {
    pub cone: usize,
    pub face: Vec<usize>,
    #[serde(with = "crate::serde_int::vec")]
    pub clearing: IntVec,
    pub elements: Vec<ElementCheck>,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ElementCheck {
    #[serde(with = "crate::serde_int::vec")]
    pub element: IntVec,
    #[serde(with = "crate::serde_int")]
    pub power: Int,
    #[serde(with = "crate::serde_int::vec")]
    pub counts: IntVec,
}

/// A verified closed embedding of the source variety into the smooth
/// quotient described by `ambient`: ambient coordinate j restricts to the
/// graded section `generators[j]` (an element of M x Z^rank written as one
/// vector). The artifact is self-contained: [`verify_closed_embedding`]
/// re-checks it against the source fan alone.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EmbeddingArtifact {
    pub source: Fan,
    pub k: u32,
    pub group: AmpleGroup,
    #[serde(with = "crate::serde_int::vec_vec")]
    pub generators: Vec<IntVec>,
    pub ambient: QuotientPresentation,
    pub separated: bool,
    /// Whether every k-tuple of image orbits shares a listed chart. For
    /// k = 2 this invariant-chart condition is stricter than separatedness
    /// and is informational only; for k > 2 it is the certificate the greedy
    /// enlargement preserves.
    pub a_k_charted: bool,
    pub transcript: Vec<ChartCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmbedError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Conoid(#[from] ConoidError),
    #[error("presentation fields have inconsistent shapes")]
    Shape,
    #[error("chart family is not downward closed or not in canonical order")]
    FamilyNotClosed,
    #[error("grading and projection do not form an exact pair")]
    NotExact,
    #[error("section generators do not span the grading group; raise the bound")]
    DegreesIncomplete,
    #[error("generator enumeration hit the layer bound before stabilizing")]
    BoundExhausted,
    #[error("ambient coordinates must be distinct sorted semigroup members")]
    BadGenerators,
    #[error("chart face {0:?} is outside the free locus")]
    UnfreeChart(Vec<usize>),
    #[error("recorded separatedness flag contradicts the chart family")]
    SeparatednessClaim,
    #[error("recorded common-chart flag contradicts the chart family")]
    ChartedClaim,
    #[error("source chart {cone} has no matching listed ambient face")]
    MissingChart { cone: usize },
    #[error("transcript for source chart {cone} fails arithmetic re-checking")]
    TranscriptMismatch { cone: usize },
    #[error("chart semigroup element {element:?} of source chart {cone} has no recorded preimage")]
    NotClosedEmbedding { cone: usize, element: IntVec },
}

/// Structural and exactness validation: canonical downward-closed face
/// family, surjective degree map, and the rows of `q` a basis of exactly the
/// kernel of the degree map (so coordinates, grading, and projection fit in
/// one exact sequence).
pub fn validate_presentation(qp: &QuotientPresentation) -> Result<(), EmbedError> {
    let w = qp.class_group.coords();
    if qp.degrees.len() != qp.n
        || qp.degrees.iter().any(|d| d.len() != w)
        || qp.q.iter().any(|row| row.len() != qp.n)
    {
        return Err(EmbedError::Shape);
    }
    for f in &qp.cones {
        if !f.windows(2).all(|p| p[0] < p[1]) || f.iter().any(|&i| i >= qp.n) {
            return Err(EmbedError::Shape);
        }
    }
    if !qp.cones.windows(2).all(|p| p[0] < p[1]) {
        return Err(EmbedError::FamilyNotClosed);
    }
    for f in &qp.cones {
        for sub in subsets_of(f) {
            if qp.cones.binary_search(&sub).is_err() {
                return Err(EmbedError::FamilyNotClosed);
            }
        }
    }
    if !qp.class_group.generates(&qp.degrees) {
        return Err(EmbedError::NotExact);
    }
    let dmat = IntMatrix::from_rows_with_width(qp.degrees.clone(), w).transpose();
    let ker = preimage_lattice(&dmat, qp.class_group.relation_vectors());
    if !lattice_eq(qp.q.clone(), ker, qp.n)
        || IntMatrix::from_rows_with_width(qp.q.clone(), qp.n).rank() != qp.q.len()
    {
        return Err(EmbedError::NotExact);
    }
    Ok(())
}

fn subsets_of(face: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(1 << face.len());
    for mask in 0u32..(1 << face.len()) {
        out.push(
            face.iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &i)| i)
                .collect(),
        );
    }
    out
}

/// The group acts freely along the open orbit stratum of an orthant face iff
/// the degrees of the non-vanishing coordinates generate the whole grading
/// group (a character separating any residual stabilizer).
pub fn is_face_free(qp: &QuotientPresentation, face: &[usize]) -> bool {
    let off: Vec<IntVec> = (0..qp.n)
        .filter(|j| !face.contains(j))
        .map(|j| qp.degrees[j].clone())
        .collect();
    qp.class_group.generates(&off)
}

/// All orthant faces with a free orbit stratum, in lexicographic order. The
/// result is closed under subsets (removing indices only adds non-vanishing
/// coordinates). Exponential in `n`; intended for small presentations.
pub fn free_locus(qp: &QuotientPresentation) -> Vec<Vec<usize>> {
    assert!(qp.n <= 12, "free locus enumeration is exponential in the coordinate count");
    let mut out: Vec<Vec<usize>> = (0u32..(1 << qp.n))
        .map(|mask| (0..qp.n).filter(|j| mask >> j & 1 == 1).collect::<Vec<usize>>())
        .filter(|face| is_face_free(qp, face))
        .collect();
    out.sort();
    out
}

fn face_meet(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().filter(|i| b.contains(i)).copied().collect()
}

/// Pairwise chart compatibility of the quotient: every image cone strongly
/// convex and every pair of image cones intersecting exactly in the image of
/// the common subface. Fails with the first bad pair in family order; an
/// equal pair flags a non-pointed image.
pub fn is_separated(qp: &QuotientPresentation) -> Separatedness {
    let images: Vec<Cone> = qp.cones.iter().map(|f| qp.image_cone(f)).collect();
    for i in 0..images.len() {
        for j in i..images.len() {
            let ok = if i == j {
                images[i].is_strongly_convex()
            } else {
                let meet = face_meet(&qp.cones[i], &qp.cones[j]);
                images[i].intersect(&images[j]) == qp.image_cone(&meet)
            };
            if !ok {
                return Separatedness::NotSeparated {
                    first: qp.cones[i].clone(),
                    second: qp.cones[j].clone(),
                };
            }
        }
    }
    Separatedness::Separated
}

/// The classical quotient presentation read off a fan: one coordinate per
/// ray graded by its divisor class, projection = the ray matrix, and the
/// downward closure of the maximal-cone ray sets as chart family.
pub fn cox_quotient_presentation(fan: &ValidatedFan) -> Result<QuotientPresentation, EmbedError> {
    let cl = class_group(fan)?;
    let n = fan.n_rays();
    let degrees: Vec<IntVec> = (0..n).map(|rho| cl.ray_class(rho)).collect();
    let q: Vec<IntVec> = (0..fan.rank())
        .map(|i| (0..n).map(|j| fan.rays()[j][i].clone()).collect())
        .collect();
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for ci in 0..fan.n_max_cones() {
        let top: Vec<usize> = fan.max_ray_set(ci).iter().copied().collect();
        cones.extend(subsets_of(&top));
    }
    cones.sort();
    cones.dedup();
    Ok(QuotientPresentation { n, class_group: cl.group, degrees, q, cones })
}

/// Vanishing order of generator (u, lambda) along ray rho: the ray pairing
/// of u shifted by the lambda-combination of the basis divisors.
fn generator_multiplier(
    fan: &ValidatedFan,
    group: &AmpleGroup,
    gen: &[Int],
    rho: usize,
) -> Int {
    let d = fan.rank();
    let mut m = dot(&gen[..d], &fan.rays()[rho]);
    for (i, b) in group.basis.iter().enumerate() {
        m += &gen[d + i] * &b.coeffs[rho];
    }
    m
}

/// Indices of the generators vanishing somewhere on the chart of a maximal
/// cone: the orthant face the chart lifts to.
fn lifted_face(
    fan: &ValidatedFan,
    group: &AmpleGroup,
    gens: &[IntVec],
    cone: usize,
) -> Vec<usize> {
    (0..gens.len())
        .filter(|&j| {
            fan.max_ray_set(cone)
                .iter()
                .any(|&rho| generator_multiplier(fan, group, &gens[j], rho).is_positive())
        })
        .collect()
}

/// Exhaustive decomposition of a semigroup element over the generator list,
/// pruned by semigroup membership. The grading cone is pointed, so the order
/// interval under `x` is finite and the search terminates.
fn decompose_in_semigroup(x: &[Int], ss: &SectionSemigroup) -> Option<IntVec> {
    fn go(rest: IntVec, ss: &SectionSemigroup, from: usize, counts: &mut IntVec) -> bool {
        if is_zero_vec(&rest) {
            return true;
        }
        for j in from..ss.generators.len() {
            let next = vec_sub(&rest, &ss.generators[j]);
            if ss.contains(&next) {
                counts[j] += 1;
                if go(next, ss, j, counts) {
                    return true;
                }
                counts[j] -= 1;
            }
        }
        false
    }
    if !ss.contains(x) {
        return None;
    }
    let mut counts = vec![Int::zero(); ss.generators.len()];
    go(x.to_vec(), ss, 0, &mut counts).then_some(counts)
}

/// True when every k-tuple drawn from `orbits` lies in a common chart of the
/// downward-closed `family`; equivalently, every union of at most k orbit
/// faces is itself listed.
fn tuples_have_common_chart(family: &[Vec<usize>], orbits: &[Vec<usize>], k: u32) -> bool {
    fn go(family: &[Vec<usize>], orbits: &[Vec<usize>], left: u32, from: usize, acc: &[usize]) -> bool {
        if family.binary_search(&acc.to_vec()).is_err() {
            return false;
        }
        if left == 0 {
            return true;
        }
        for (i, orbit) in orbits.iter().enumerate().skip(from) {
            let mut joined: Vec<usize> = acc.to_vec();
            joined.extend(orbit.iter().copied());
            joined.sort_unstable();
            joined.dedup();
            if !go(family, orbits, left - 1, i, &joined) {
                return false;
            }
        }
        true
    }
    go(family, orbits, k, 0, &[])
}

/// The full embedding pipeline. Certificates are normalized and merged into
/// a divisor group, the graded section generators become ambient
/// coordinates, source charts become orthant faces, and the chart family is
/// greedily enlarged inside the free locus (lexicographic candidate order)
/// as long as separatedness, and for k > 2 the common-chart certificate,
/// survive. The returned artifact has already passed
/// [`verify_closed_embedding`].
pub fn build_embedding(
    fan: &ValidatedFan,
    k: u32,
    bound: u32,
) -> Result<EmbeddingArtifact, EmbedError> {
    assert!(k >= 2, "embedding targets need at least the pairwise property");
    let certs = is_divisorial(fan)?;
    let certs = normalize_certificates(fan, &certs)?;
    let group = build_ample_group(fan, &certs, MergePolicy::MinimalRank)?;
    let ss = section_semigroup(fan, &group, bound)?;
    if !ss.complete {
        return Err(EmbedError::BoundExhausted);
    }
    let d = fan.rank();
    let r = group.rank();
    let n = ss.generators.len();
    if IntMatrix::from_rows_with_width(ss.rows.clone(), d + r).rank() != d + r {
        return Err(EmbedError::Conoid(ConoidError::GradingNotPointed));
    }
    let degrees: Vec<IntVec> = ss.generators.iter().map(|g| g[d..].to_vec()).collect();
    let grading = FinAbGroup::free(r);
    if !grading.generates(&degrees) {
        return Err(EmbedError::DegreesIncomplete);
    }
    let lmat = IntMatrix::from_rows_with_width(degrees.clone(), r).transpose();
    let kb = kernel_basis(&lmat);
    let q: Vec<IntVec> = (0..kb.cols).map(|c| kb.col(c)).collect();

    let lifted: Vec<Vec<usize>> =
        (0..fan.n_max_cones()).map(|t| lifted_face(fan, &group, &ss.generators, t)).collect();
    let mut cones: Vec<Vec<usize>> = Vec::new();
    for f in &lifted {
        cones.extend(subsets_of(f));
    }
    cones.sort();
    cones.dedup();
    let image_orbits = cones.clone();
    let mut qp = QuotientPresentation { n, class_group: grading, degrees, q, cones };
    for f in &lifted {
        if !is_face_free(&qp, f) {
            return Err(EmbedError::UnfreeChart(f.clone()));
        }
    }
    validate_presentation(&qp)?;

    let keeps = |qp: &QuotientPresentation| {
        is_separated(qp) == Separatedness::Separated
            && (k == 2 || tuples_have_common_chart(&qp.cones, &image_orbits, k))
    };
    // Enlargement is skipped when the lifted family already violates the
    // target property (the honest non-separated outcome) or when the free
    // locus is too large to enumerate.
    if keeps(&qp) && qp.n <= 12 {
        for cand in free_locus(&qp) {
            if qp.cones.binary_search(&cand).is_ok() {
                continue;
            }
            let mut trial = qp.cones.clone();
            trial.extend(subsets_of(&cand));
            trial.sort();
            trial.dedup();
            let trial_qp = QuotientPresentation { cones: trial, ..qp.clone() };
            if keeps(&trial_qp) {
                qp = trial_qp;
            }
        }
    }
    let separated = is_separated(&qp) == Separatedness::Separated;
    let a_k_charted = tuples_have_common_chart(&qp.cones, &image_orbits, k);

    let mut transcript = Vec::new();
    for t in 0..fan.n_max_cones() {
        let cs = &group.cover[t];
        let mut clearing_target = cs.numerator.clone();
        clearing_target.extend(cs.lambda.iter().cloned());
        let clearing = decompose_in_semigroup(&clearing_target, &ss)
            .ok_or(EmbedError::BoundExhausted)?;
        let chart = fan.max_ray_set(t);
        let mut elements = Vec::new();
        for h in fan.chart_semigroup(fan.max_cone(t)) {
            let mut power = Int::zero();
            for rho in 0..fan.n_rays() {
                if chart.contains(&rho) {
                    continue;
                }
                let deficit = -dot(&h, &fan.rays()[rho]);
                // The cover monomial vanishes to order >= 1 off the chart.
                let need = ceil_div(&deficit, &generator_multiplier(fan, &group, &clearing_target, rho));
                if need > power {
                    power = need;
                }
            }
            let mut target: IntVec = h.clone();
            target.extend(vec![Int::zero(); r]);
            for (x, e) in target.iter_mut().zip(&clearing_target) {
                *x += &power * e;
            }
            let counts =
                decompose_in_semigroup(&target, &ss).ok_or(EmbedError::BoundExhausted)?;
            elements.push(ElementCheck { element: h, power, counts });
        }
        transcript.push(ChartCheck { cone: t, face: lifted[t].clone(), clearing, elements });
    }

    let art = EmbeddingArtifact {
        source: fan.fan().clone(),
        k,
        group,
        generators: ss.generators.clone(),
        ambient: qp,
        separated,
        a_k_charted,
        transcript,
    };
    verify_closed_embedding(&art)?;
    Ok(art)
}

/// Full offline re-check of an artifact from the source fan alone: divisor
/// group, presentation exactness, freeness of every listed chart, the
/// recorded separatedness and common-chart claims, and chart by chart the
/// arithmetic transcript showing each chart-semigroup element is the
/// restriction of an invariant ambient monomial. No search is repeated.
pub fn verify_closed_embedding(art: &EmbeddingArtifact) -> Result<(), EmbedError> {
    let fan = art.source.clone().validate()?;
    verify_ample_group(&fan, &art.group)?;
    validate_presentation(&art.ambient)?;
    let d = fan.rank();
    let r = art.group.rank();
    let n = art.generators.len();

    // Ambient coordinates are the graded generators, sorted and distinct,
    // each a genuine section (nonnegative vanishing orders everywhere).
    if art.ambient.n != n
        || art.ambient.class_group != FinAbGroup::free(r)
        || art.generators.iter().any(|g| g.len() != d + r)
    {
        return Err(EmbedError::Shape);
    }
    if !art
        .generators
        .windows(2)
        .all(|p| lex_cmp(&p[0], &p[1]) == std::cmp::Ordering::Less)
    {
        return Err(EmbedError::BadGenerators);
    }
    for g in &art.generators {
        if (0..fan.n_rays())
            .any(|rho| generator_multiplier(&fan, &art.group, g, rho).is_negative())
        {
            return Err(EmbedError::BadGenerators);
        }
    }
    for (j, g) in art.generators.iter().enumerate() {
        if art.ambient.degrees[j] != g[d..] {
            return Err(EmbedError::Shape);
        }
    }
    for f in &art.ambient.cones {
        if !is_face_free(&art.ambient, f) {
            return Err(EmbedError::UnfreeChart(f.clone()));
        }
    }
    if art.separated != (is_separated(&art.ambient) == Separatedness::Separated) {
        return Err(EmbedError::SeparatednessClaim);
    }
    let lifted: Vec<Vec<usize>> =
        (0..fan.n_max_cones()).map(|t| lifted_face(&fan, &art.group, &art.generators, t)).collect();
    let mut image_orbits: Vec<Vec<usize>> = Vec::new();
    for f in &lifted {
        image_orbits.extend(subsets_of(f));
    }
    image_orbits.sort();
    image_orbits.dedup();
    if art.a_k_charted != tuples_have_common_chart(&art.ambient.cones, &image_orbits, art.k) {
        return Err(EmbedError::ChartedClaim);
    }

    if art.transcript.len() != fan.n_max_cones() {
        return Err(EmbedError::Shape);
    }
    for (t, check) in art.transcript.iter().enumerate() {
        if check.cone != t {
            return Err(EmbedError::TranscriptMismatch { cone: t });
        }
        if check.face != lifted[t] || art.ambient.cones.binary_search(&check.face).is_err() {
            return Err(EmbedError::MissingChart { cone: t });
        }
        // The clearing monomial: a nonnegative combination supported on the
        // chart's non-vanishing coordinates, equal to the cover section.
        let cs = &art.group.cover[t];
        let mut clearing_target = cs.numerator.clone();
        clearing_target.extend(cs.lambda.iter().cloned());
        if check.clearing.len() != n
            || check.clearing.iter().any(|c| c.is_negative())
            || combination(&art.generators, &check.clearing) != clearing_target
            || check.face.iter().any(|&j| check.clearing[j].is_positive())
        {
            return Err(EmbedError::TranscriptMismatch { cone: t });
        }
        // Every chart-semigroup element must be witnessed, in order.
        let hb = fan.chart_semigroup(fan.max_cone(t));
        for (i, h) in hb.iter().enumerate() {
            let missing = || EmbedError::NotClosedEmbedding { cone: t, element: h.clone() };
            let ec = check.elements.get(i).ok_or_else(missing)?;
            if ec.element != *h {
                return Err(missing());
            }
            if ec.power.is_negative()
                || ec.counts.len() != n
                || ec.counts.iter().any(|c| c.is_negative())
            {
                return Err(EmbedError::TranscriptMismatch { cone: t });
            }
            let mut target: IntVec = h.clone();
            target.extend(vec![Int::zero(); r]);
            for (x, e) in target.iter_mut().zip(&clearing_target) {
                *x += &ec.power * e;
            }
            if combination(&art.generators, &ec.counts) != target {
                return Err(EmbedError::TranscriptMismatch { cone: t });
            }
            // Dividing the witnessed combination by the clearing power
            // expresses h as an invariant Laurent monomial regular on the
            // chart (negative exponents only at non-vanishing coordinates),
            // which is exactly chart-wise surjectivity.
        }
        if check.elements.len() != hb.len() {
            return Err(EmbedError::TranscriptMismatch { cone: t });
        }
    }
    Ok(())
}

fn combination(gens: &[IntVec], counts: &[Int]) -> IntVec {
    let width = gens.first().map_or(0, |g| g.len());
    let mut out = vec![Int::zero(); width];
    for (c, g) in counts.iter().zip(gens) {
        for (o, x) in out.iter_mut().zip(g) {
            *o += c * x;
        }
    }
    out
}
