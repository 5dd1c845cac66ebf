//! Finite orbit topologies and the enumeration of maximal subsets whose
//! k-point configurations always fit inside one member of a fixed family of
//! open sets.
//!
//! Points are torus orbits (of a fan, or of a quotient presentation's chart
//! family) and the topology is the orbit closure order, so every set in
//! sight is a union of orbits by construction. The default family is the
//! invariant affine charts. Note the scope this imposes: the computation
//! classifies subsets all of whose k-tuples share an *invariant* chart,
//! which is stronger than sharing an arbitrary open affine. The projective
//! line already separates the two notions: any two of its points lie in a
//! common affine chart, but its two fixed points lie in no common invariant
//! one. Pairwise compatibility of genuine quotients is therefore decided by
//! [`crate::embed::is_separated`], not here.
//!
//! The core operator sends an open set Y to X(Y), the complement of those
//! component projections that miss Y. Over all open Y it takes finitely
//! many values, it only enlarges Y, and it preserves the k-tuple property,
//! which turns the search for maximal such subsets into a finite
//! enumeration over meet patterns.

use std::collections::BTreeSet;

use crate::fan::ValidatedFan;
use crate::par::par_map;

/// A finite T0 topological space given by its closure operator:
/// `closures[x]` is the set of points in the closure of x, including x.
/// Open sets are exactly the complements of closure-closed sets;
/// irreducible closed sets are exactly the single-point closures.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct FiniteSpace {
    pub closures: Vec<BTreeSet<usize>>,
}

/// Named open sets of a [`FiniteSpace`], each a set of point indices.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct OpenFamily {
    pub names: Vec<String>,
    pub sets: Vec<BTreeSet<usize>>,
}

/// Full analysis at level k: generic tuples of the complement components,
/// every value the X(Y) operator attains over open Y, and the maximal
/// subsets with the k-tuple property. All sets are orbit index sets.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct AkAnalysis {
    pub k: u32,
    pub components: Vec<Vec<usize>>,
    pub xy_values: Vec<BTreeSet<usize>>,
    pub maximal: Vec<BTreeSet<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AksetError {
    #[error("closure of point {point} mentions an out-of-range point")]
    PointOutOfRange { point: usize },
    #[error("closure of point {point} does not contain the point itself")]
    NotExtensive { point: usize },
    #[error("closure of point {point} is not closed under the closure of {via}")]
    NotTransitive { point: usize, via: usize },
    #[error("points {a} and {b} have equal closures")]
    NotSeparating { a: usize, b: usize },
    #[error("family names and sets differ in length")]
    FamilyShape,
    #[error("family member {name:?} is not open")]
    NotOpen { name: String },
}

impl FiniteSpace {
    /// Validates the closure axioms: containment of the point, transitivity,
    /// and T0 (distinct points have distinct closures).
    pub fn new(closures: Vec<BTreeSet<usize>>) -> Result<FiniteSpace, AksetError> {
        let space = FiniteSpace { closures };
        space.validate()?;
        Ok(space)
    }

    pub fn validate(&self) -> Result<(), AksetError> {
        let n = self.closures.len();
        for (x, cl) in self.closures.iter().enumerate() {
            if cl.iter().any(|&y| y >= n) {
                return Err(AksetError::PointOutOfRange { point: x });
            }
            if !cl.contains(&x) {
                return Err(AksetError::NotExtensive { point: x });
            }
            for &y in cl {
                if !self.closures[y].is_subset(cl) {
                    return Err(AksetError::NotTransitive { point: x, via: y });
                }
                if y != x && self.closures[y] == *cl {
                    return Err(AksetError::NotSeparating { a: x, b: y });
                }
            }
        }
        Ok(())
    }

    /// Orbit space of a fan: point i is `fan.orbits()[i]`, and the closure
    /// of an orbit consists of the orbits of all cones containing its cone
    /// (equivalently, with a superset of its spanning rays).
    pub fn from_fan(fan: &ValidatedFan) -> FiniteSpace {
        let orbits = fan.orbits();
        let closures = orbits
            .iter()
            .map(|o| {
                (0..orbits.len()).filter(|&j| o.rays.is_subset(&orbits[j].rays)).collect()
            })
            .collect();
        FiniteSpace::new(closures).expect("fan orbit posets satisfy the closure axioms")
    }

    /// Orbit space of a chart family over orthant faces: point i is the
    /// orbit of `faces[i]`, whose closure consists of the orbits of listed
    /// faces containing it. Faces must be distinct.
    pub fn from_faces(faces: &[Vec<usize>]) -> Result<FiniteSpace, AksetError> {
        let key = |f: &Vec<usize>| -> BTreeSet<usize> { f.iter().copied().collect() };
        let sets: Vec<BTreeSet<usize>> = faces.iter().map(key).collect();
        let closures = sets
            .iter()
            .map(|f| (0..sets.len()).filter(|&j| f.is_subset(&sets[j])).collect())
            .collect();
        FiniteSpace::new(closures)
    }

    pub fn n_points(&self) -> usize {
        self.closures.len()
    }

    /// A set is open iff no outside point has closure meeting it.
    pub fn is_open(&self, y: &BTreeSet<usize>) -> bool {
        y.iter().all(|&p| p < self.n_points())
            && (0..self.n_points())
                .filter(|p| !y.contains(p))
                .all(|p| self.closures[p].is_disjoint(y))
    }

    /// The smallest open set containing x: all points with x in their
    /// closure. For fan orbit spaces this is the invariant chart of the
    /// orbit's cone.
    pub fn minimal_open_around(&self, x: usize) -> BTreeSet<usize> {
        (0..self.n_points()).filter(|&y| self.closures[y].contains(&x)).collect()
    }
}

impl OpenFamily {
    pub fn new(
        space: &FiniteSpace,
        names: Vec<String>,
        sets: Vec<BTreeSet<usize>>,
    ) -> Result<OpenFamily, AksetError> {
        if names.len() != sets.len() {
            return Err(AksetError::FamilyShape);
        }
        for (name, set) in names.iter().zip(&sets) {
            if !space.is_open(set) {
                return Err(AksetError::NotOpen { name: name.clone() });
            }
        }
        Ok(OpenFamily { names, sets })
    }

    /// The default family: the minimal open set around every point. On fan
    /// orbit spaces these are precisely the invariant affine charts, named
    /// by the index of their closed orbit. Distinct points give distinct
    /// charts in a T0 space.
    pub fn invariant_charts(space: &FiniteSpace) -> OpenFamily {
        let sets: Vec<BTreeSet<usize>> =
            (0..space.n_points()).map(|x| space.minimal_open_around(x)).collect();
        let names = (0..space.n_points()).map(|x| format!("U_{x}")).collect();
        OpenFamily { names, sets }
    }

    pub fn union(&self) -> BTreeSet<usize> {
        self.sets.iter().flatten().copied().collect()
    }
}

/// Direct check of the k-tuple property from its definition: every k-tuple
/// of points of `y` lies inside a single family member. Exponential in k;
/// the enumeration machinery goes through components instead, and the two
/// routes are compared in tests.
pub fn is_uk_subset(space: &FiniteSpace, family: &OpenFamily, k: u32, y: &BTreeSet<usize>) -> bool {
    assert!(k >= 1, "tuple length must be positive");
    debug_assert!(space.is_open(y));
    let pts: Vec<usize> = y.iter().copied().collect();
    let mut tuple = vec![0usize; k as usize];
    if pts.is_empty() {
        return true;
    }
    loop {
        let covered = family
            .sets
            .iter()
            .any(|u| tuple.iter().all(|&i| u.contains(&pts[i])));
        if !covered {
            return false;
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
                return true;
            }
        }
    }
}

/// Irreducible components of the closed set of k-tuples not covered by any
/// single family member, each represented by its generic tuple of orbits.
/// Irreducible closed subsets of the product are products of orbit
/// closures, so the components are the specialization-maximal uncovered
/// tuples; the result is sorted and pairwise non-contained.
pub fn complement_components(
    space: &FiniteSpace,
    family: &OpenFamily,
    k: u32,
) -> Vec<Vec<usize>> {
    assert!(k >= 1, "tuple length must be positive");
    let n = space.n_points();
    assert!(
        (n as u64).checked_pow(k).is_some_and(|t| t <= 1_000_000),
        "tuple enumeration too large"
    );
    if n == 0 {
        return Vec::new();
    }
    let mut uncovered: Vec<Vec<usize>> = Vec::new();
    let mut tuple = vec![0usize; k as usize];
    loop {
        let covered =
            family.sets.iter().any(|u| tuple.iter().all(|p| u.contains(p)));
        if !covered {
            uncovered.push(tuple.clone());
        }
        let mut pos = 0;
        loop {
            tuple[pos] += 1;
            if tuple[pos] < n {
                break;
            }
            tuple[pos] = 0;
            pos += 1;
            if pos == tuple.len() {
                let dominated = |t: &Vec<usize>| {
                    uncovered.iter().any(|s| {
                        s != t
                            && t.iter().zip(s).all(|(&ti, &si)| space.closures[si].contains(&ti))
                    })
                };
                let mut components: Vec<Vec<usize>> =
                    uncovered.iter().filter(|t| !dominated(t)).cloned().collect();
                components.sort();
                return components;
            }
        }
    }
}

/// The enlargement operator: X(Y) removes from the space every component
/// projection (an orbit closure) that misses Y. The result is open, and
/// contains Y whenever Y is open.
pub fn xy_operator(
    space: &FiniteSpace,
    components: &[Vec<usize>],
    y: &BTreeSet<usize>,
) -> BTreeSet<usize> {
    assert!(space.is_open(y), "the operator is defined on open sets");
    let mut out: BTreeSet<usize> = (0..space.n_points()).collect();
    for comp in components {
        for &p in comp {
            if space.closures[p].is_disjoint(y) {
                for &q in &space.closures[p] {
                    out.remove(&q);
                }
            }
        }
    }
    out
}

/// k-tuple property via the components: Y avoids the uncovered locus iff
/// each component has a projection disjoint from Y.
fn uk_by_components(space: &FiniteSpace, components: &[Vec<usize>], y: &BTreeSet<usize>) -> bool {
    components
        .iter()
        .all(|comp| comp.iter().any(|&p| space.closures[p].is_disjoint(y)))
}

/// All maximal open subsets with the k-tuple property, sorted and pairwise
/// incomparable. Candidates range over meet patterns: a subset S of the
/// component projection points determines the open set keeping exactly the
/// closures of S, and every maximal subset arises this way because it is
/// fixed by the enlargement operator.
pub fn maximal_uk_subsets(
    space: &FiniteSpace,
    family: &OpenFamily,
    k: u32,
) -> Vec<BTreeSet<usize>> {
    let components = complement_components(space, family, k);
    let mut generic: Vec<usize> = components.iter().flatten().copied().collect();
    generic.sort_unstable();
    generic.dedup();
    assert!(generic.len() <= 20, "meet pattern enumeration too large");
    let masks: Vec<u32> = (0u32..(1 << generic.len())).collect();
    let mut kept: Vec<BTreeSet<usize>> = par_map(&masks, |&mask| {
        let mut cand: BTreeSet<usize> = (0..space.n_points()).collect();
        for (b, &p) in generic.iter().enumerate() {
            if mask >> b & 1 == 0 {
                for &q in &space.closures[p] {
                    cand.remove(&q);
                }
            }
        }
        uk_by_components(space, &components, &cand).then_some(cand)
    })
    .into_iter()
    .flatten()
    .collect();
    kept.sort();
    kept.dedup();
    let maximal: Vec<BTreeSet<usize>> = kept
        .iter()
        .filter(|y| !kept.iter().any(|z| *y != z && y.is_subset(z)))
        .cloned()
        .collect();
    maximal
}

/// Components, the full value table of the enlargement operator, and the
/// maximal subsets in one report.
pub fn ak_analysis(space: &FiniteSpace, family: &OpenFamily, k: u32) -> AkAnalysis {
    let components = complement_components(space, family, k);
    let mut generic: Vec<usize> = components.iter().flatten().copied().collect();
    generic.sort_unstable();
    generic.dedup();
    assert!(generic.len() <= 20, "meet pattern enumeration too large");
    // X(Y) only depends on which projection points lie in the open set Y,
    // and a pattern S is attained exactly when the smallest open set around
    // S avoids the remaining projection points.
    let mut xy_values: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 0u32..(1 << generic.len()) {
        let selected: Vec<usize> = generic
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let mut y: BTreeSet<usize> = BTreeSet::new();
        for &p in &selected {
            y.extend(space.minimal_open_around(p));
        }
        if generic.iter().any(|p| !selected.contains(p) && y.contains(p)) {
            continue;
        }
        xy_values.push(xy_operator(space, &components, &y));
    }
    xy_values.sort();
    xy_values.dedup();
    let maximal = maximal_uk_subsets(space, family, k);
    AkAnalysis { k, components, xy_values, maximal }
}
