//! Fans of strongly convex rational cones and their orbit combinatorics.
//!
//! A raw [`Fan`] is a rank, a list of primitive rays, and maximal cones given
//! as ray-index sets. [`Fan::validate`] checks the fan axioms (strong
//! convexity, listed rays are exactly the extreme rays, pairwise intersection
//! in common faces) and produces a [`ValidatedFan`] carrying the full cone
//! and face structure: every cone of the fan corresponds to a torus orbit of
//! the associated variety, with reverse-inclusion of cones matching orbit
//! closure.

use crate::arith::{is_zero_vec, lex_cmp, primitive, IntVec};
use crate::cone::Cone;
use crate::hilbert::semigroup_generators;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Fan {
    pub rank: usize,
    #[serde(with = "crate::serde_int::vec_vec")]
    pub rays: Vec<IntVec>,
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FanError {
    #[error("rank must be positive")]
    ZeroRank,
    #[error("fan must have at least one cone")]
    NoCones,
    #[error("ray {0} has {1} coordinates, expected {2}")]
    WrongDimension(usize, usize, usize),
    #[error("ray {0} is zero")]
    ZeroRay(usize),
    #[error("ray {0} is not primitive")]
    NonPrimitiveRay(usize),
    #[error("rays {0} and {1} are equal")]
    DuplicateRay(usize, usize),
    #[error("ray {0} is not used by any cone")]
    UnusedRay(usize),
    #[error("cone {cone} lists ray index {index}, but there are only {n_rays} rays")]
    RayIndexOutOfRange { cone: usize, index: usize, n_rays: usize },
    #[error("cone {cone} repeats ray index {index}")]
    RepeatedIndex { cone: usize, index: usize },
    #[error("cone {0} is not strongly convex")]
    NotStronglyConvex(usize),
    #[error("cone {0}: listed rays are not exactly its extreme rays")]
    RaysNotExtreme(usize),
    #[error("cone {0} is contained in cone {1}")]
    ConeContained(usize, usize),
    #[error("cones {0} and {1} do not intersect in a common face")]
    BadIntersection(usize, usize),
}

/// A cone of the fan, i.e. a torus orbit of the variety.
#[derive(Clone, Debug)]
pub struct OrbitCone {
    pub cone: Cone,
    /// Fan ray indices spanning the cone.
    pub rays: BTreeSet<usize>,
    pub dim: usize,
    /// Indices of the maximal cones containing this cone.
    pub max_cones: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FanProps {
    pub complete: bool,
    pub smooth: bool,
    pub simplicial: bool,
}

#[derive(Clone, Debug)]
pub struct ValidatedFan {
    fan: Fan,
    cones: Vec<Cone>,
    ray_sets: Vec<BTreeSet<usize>>,
    orbits: Vec<OrbitCone>,
    props: FanProps,
}

impl Fan {
    pub fn validate(self) -> Result<ValidatedFan, FanError> {
        if self.rank == 0 {
            return Err(FanError::ZeroRank);
        }
        if self.max_cones.is_empty() {
            return Err(FanError::NoCones);
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.len() != self.rank {
                return Err(FanError::WrongDimension(i, r.len(), self.rank));
            }
            if is_zero_vec(r) {
                return Err(FanError::ZeroRay(i));
            }
            if &primitive(r) != r {
                return Err(FanError::NonPrimitiveRay(i));
            }
            for (j, s) in self.rays.iter().enumerate().take(i) {
                if r == s {
                    return Err(FanError::DuplicateRay(j, i));
                }
            }
        }

        let mut ray_sets: Vec<BTreeSet<usize>> = Vec::new();
        for (ci, idxs) in self.max_cones.iter().enumerate() {
            let mut set = BTreeSet::new();
            for &ix in idxs {
                if ix >= self.rays.len() {
                    return Err(FanError::RayIndexOutOfRange {
                        cone: ci,
                        index: ix,
                        n_rays: self.rays.len(),
                    });
                }
                if !set.insert(ix) {
                    return Err(FanError::RepeatedIndex { cone: ci, index: ix });
                }
            }
            ray_sets.push(set);
        }
        let mut used: BTreeSet<usize> = BTreeSet::new();
        for set in &ray_sets {
            used.extend(set.iter().copied());
        }
        if let Some(i) = (0..self.rays.len()).find(|i| !used.contains(i)) {
            return Err(FanError::UnusedRay(i));
        }

        let cones: Vec<Cone> = ray_sets
            .iter()
            .map(|set| {
                Cone::from_gens(self.rank, set.iter().map(|&i| self.rays[i].clone()).collect())
            })
            .collect();
        for (ci, cone) in cones.iter().enumerate() {
            if !cone.is_strongly_convex() {
                return Err(FanError::NotStronglyConvex(ci));
            }
            let mut listed: Vec<IntVec> =
                ray_sets[ci].iter().map(|&i| self.rays[i].clone()).collect();
            listed.sort_by(|a, b| lex_cmp(a, b));
            if cone.gens != listed {
                return Err(FanError::RaysNotExtreme(ci));
            }
        }
        for i in 0..cones.len() {
            for j in 0..cones.len() {
                if i != j && cones[j].contains_cone(&cones[i]) {
                    return Err(FanError::ConeContained(i, j));
                }
            }
        }
        let face_lists: Vec<Vec<Cone>> = cones.iter().map(|c| c.faces()).collect();
        for i in 0..cones.len() {
            for j in i + 1..cones.len() {
                let meet = cones[i].intersect(&cones[j]);
                let is_common = face_lists[i].iter().any(|f| f.gens == meet.gens)
                    && face_lists[j].iter().any(|f| f.gens == meet.gens);
                if !is_common {
                    return Err(FanError::BadIntersection(i, j));
                }
            }
        }

        // Orbit list: every face of every maximal cone, keyed by its ray set.
        let mut orbits: Vec<OrbitCone> = Vec::new();
        for (ci, faces) in face_lists.iter().enumerate() {
            for f in faces {
                let rays: BTreeSet<usize> = f
                    .gens
                    .iter()
                    .map(|g| self.rays.iter().position(|r| r == g).expect("face ray is a fan ray"))
                    .collect();
                match orbits.iter_mut().find(|o| o.rays == rays) {
                    Some(o) => o.max_cones.push(ci),
                    None => orbits.push(OrbitCone {
                        dim: f.dim(),
                        cone: f.clone(),
                        rays,
                        max_cones: vec![ci],
                    }),
                }
            }
        }
        for o in &mut orbits {
            o.max_cones.sort_unstable();
            o.max_cones.dedup();
        }
        orbits.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then_with(|| a.rays.iter().collect::<Vec<_>>().cmp(&b.rays.iter().collect()))
        });

        let props = compute_props(&self, &cones, &orbits);
        Ok(ValidatedFan { fan: self, cones, ray_sets, orbits, props })
    }
}

fn compute_props(fan: &Fan, cones: &[Cone], orbits: &[OrbitCone]) -> FanProps {
    let simplicial = cones.iter().all(|c| c.is_simplicial());
    let smooth = cones.iter().all(|c| c.is_smooth());

    // Completeness: full-dimensional maximal cones, every wall shared by
    // exactly two of them, and the wall-adjacency graph connected. The
    // support is then a cone without boundary, hence all of the space.
    let full_dim = cones.iter().all(|c| c.dim() == fan.rank);
    let walls: Vec<&OrbitCone> = orbits.iter().filter(|o| o.dim + 1 == fan.rank).collect();
    let two_sided = full_dim && !walls.is_empty() && walls.iter().all(|w| w.max_cones.len() == 2);
    let connected = two_sided && {
        let n = cones.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for w in &walls {
                if w.max_cones.contains(&i) {
                    for &j in &w.max_cones {
                        if !seen[j] {
                            seen[j] = true;
                            stack.push(j);
                        }
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    FanProps { complete: connected, smooth, simplicial }
}

impl ValidatedFan {
    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn rank(&self) -> usize {
        self.fan.rank
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.fan.rays
    }

    pub fn n_rays(&self) -> usize {
        self.fan.rays.len()
    }

    pub fn n_max_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn max_cone(&self, i: usize) -> &Cone {
        &self.cones[i]
    }

    pub fn max_ray_set(&self, i: usize) -> &BTreeSet<usize> {
        &self.ray_sets[i]
    }

    pub fn orbits(&self) -> &[OrbitCone] {
        &self.orbits
    }

    pub fn orbit_by_rays(&self, rays: &BTreeSet<usize>) -> Option<usize> {
        self.orbits.iter().position(|o| &o.rays == rays)
    }

    pub fn props(&self) -> FanProps {
        self.props
    }

    /// Coordinate semigroup generators of the invariant chart attached to a
    /// cone: the Hilbert basis of its dual.
    pub fn chart_semigroup(&self, cone: &Cone) -> Vec<IntVec> {
        semigroup_generators(&cone.dual())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::vec_i64;

    fn fan(rank: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Fan {
        Fan {
            rank,
            rays: rays.iter().map(|r| vec_i64(r)).collect(),
            max_cones: max_cones.iter().map(|c| c.to_vec()).collect(),
        }
    }

    fn plane_fan() -> Fan {
        fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]])
    }

    #[test]
    fn valid_fans() {
        let p2 = plane_fan().validate().unwrap();
        assert_eq!(p2.orbits().len(), 7);
        assert_eq!(p2.props(), FanProps { complete: true, smooth: true, simplicial: true });

        let p1xp1 = fan(
            2,
            &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]],
            &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]],
        )
        .validate()
        .unwrap();
        assert_eq!(p1xp1.orbits().len(), 9);
        assert!(p1xp1.props().complete && p1xp1.props().smooth);

        let line = fan(1, &[&[1]], &[&[0]]).validate().unwrap();
        assert_eq!(line.orbits().len(), 2);
        assert!(!line.props().complete);

        let p1 = fan(1, &[&[1], &[-1]], &[&[0], &[1]]).validate().unwrap();
        assert!(p1.props().complete);

        let weighted = fan(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[0, 2]])
            .validate()
            .unwrap();
        assert!(weighted.props().complete && weighted.props().simplicial);
        assert!(!weighted.props().smooth);

        let torus = fan(2, &[], &[&[]]).validate().unwrap();
        assert_eq!(torus.orbits().len(), 1);
        assert!(!torus.props().complete);

        let affine_plane = fan(2, &[&[1, 0], &[0, 1]], &[&[0, 1]]).validate().unwrap();
        assert!(!affine_plane.props().complete);
        assert_eq!(affine_plane.orbits().len(), 4);
    }

    #[test]
    fn orbit_structure() {
        let p2 = plane_fan().validate().unwrap();
        let dims: Vec<usize> = p2.orbits().iter().map(|o| o.dim).collect();
        assert_eq!(dims, vec![0, 1, 1, 1, 2, 2, 2]);
        // The zero cone lies in every maximal cone.
        assert_eq!(p2.orbits()[0].max_cones, vec![0, 1, 2]);
        // Each wall lies in exactly two.
        for o in p2.orbits().iter().filter(|o| o.dim == 1) {
            assert_eq!(o.max_cones.len(), 2);
        }
        let top: BTreeSet<usize> = [0, 1].into_iter().collect();
        assert!(p2.orbit_by_rays(&top).is_some());
    }

    #[test]
    fn invalid_fans() {
        let e = fan(2, &[&[2, 0], &[0, 1]], &[&[0, 1]]).validate().unwrap_err();
        assert_eq!(e, FanError::NonPrimitiveRay(0));

        let e = fan(2, &[&[1, 0], &[1, 0]], &[&[0, 1]]).validate().unwrap_err();
        assert_eq!(e, FanError::DuplicateRay(0, 1));

        let e = fan(2, &[&[1, 0], &[0, 1]], &[&[0]]).validate().unwrap_err();
        assert_eq!(e, FanError::UnusedRay(1));

        let e = fan(2, &[&[1, 0], &[-1, 0]], &[&[0, 1]]).validate().unwrap_err();
        assert_eq!(e, FanError::NotStronglyConvex(0));

        let e = fan(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 1, 2]]).validate().unwrap_err();
        assert_eq!(e, FanError::RaysNotExtreme(0));

        let e = fan(2, &[&[1, 0], &[0, 1], &[1, 1]], &[&[0, 1], &[2]]).validate().unwrap_err();
        assert_eq!(e, FanError::ConeContained(1, 0));

        // Two full cones overlapping in more than a face.
        let e = fan(2, &[&[1, 0], &[0, 1], &[1, 1], &[-1, 1]], &[&[0, 1], &[2, 3]])
            .validate()
            .unwrap_err();
        assert_eq!(e, FanError::BadIntersection(0, 1));

        let e = fan(2, &[&[1, 0]], &[&[0, 5]]).validate().unwrap_err();
        assert!(matches!(e, FanError::RayIndexOutOfRange { .. }));

        let e = fan(0, &[], &[&[]]).validate().unwrap_err();
        assert_eq!(e, FanError::ZeroRank);
    }

    #[test]
    fn chart_semigroups() {
        let weighted = fan(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[0, 2]])
            .validate()
            .unwrap();
        // Chart of the singular cone spanned by rays 0 and 2.
        let set: BTreeSet<usize> = [0, 2].into_iter().collect();
        let oi = weighted.orbit_by_rays(&set).unwrap();
        let sg = weighted.chart_semigroup(&weighted.orbits()[oi].cone);
        assert_eq!(sg, vec![vec_i64(&[0, -1]), vec_i64(&[1, -1]), vec_i64(&[2, -1])]);
        // The torus chart of the zero cone needs all four coordinate directions.
        let zero_orbit = &weighted.orbits()[0];
        assert_eq!(zero_orbit.dim, 0);
        let sg = weighted.chart_semigroup(&zero_orbit.cone);
        assert_eq!(sg.len(), 4);
    }

    #[test]
    fn serde_round_trip() {
        let f = plane_fan();
        let json = serde_json::to_string(&f).unwrap();
        let back: Fan = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
    }
}
