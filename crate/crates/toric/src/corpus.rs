//! Built-in example fans and presentations, resolvable by name.
//!
//! Names: `p2`, `p1`, `p1xp1`, `wp112`, `hirzebruch_<a>` (parametrized),
//! `nondivisorial3`, and the presentation `doubled_line_presentation`.

use crate::arith::vec_i64;
use crate::embed::QuotientPresentation;
use crate::fan::Fan;
use crate::lattice::FinAbGroup;

fn fan(rank: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Fan {
    Fan {
        rank,
        rays: rays.iter().map(|r| vec_i64(r)).collect(),
        max_cones: max_cones.iter().map(|c| c.to_vec()).collect(),
    }
}

/// The projective plane: complete, smooth, class group Z.
pub fn projective_plane() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]])
}

/// The projective line.
pub fn projective_line() -> Fan {
    fan(1, &[&[1], &[-1]], &[&[0], &[1]])
}

/// Product of two projective lines: class group Z^2.
pub fn product_of_lines() -> Fan {
    fan(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[&[0, 2], &[0, 3], &[1, 2], &[1, 3]])
}

/// The a-th Hirzebruch surface (a = 0 recovers a product of lines).
pub fn hirzebruch(a: u32) -> Fan {
    fan(
        2,
        &[&[1, 0], &[0, 1], &[-1, a as i64], &[0, -1]],
        &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]],
    )
}

/// Weighted projective plane with weights (1,1,2): complete and simplicial
/// but singular (one multiplicity-2 cone).
pub fn weighted_plane_112() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, -2]], &[&[0, 1], &[1, 2], &[0, 2]])
}

/// A complete non-simplicial threefold with only trivial Cartier divisors,
/// hence not divisorial: the fan over the faces of a cube with one corner
/// moved off-lattice-symmetry to (1,2,3), which kills all nontrivial support
/// functions.
pub fn trivial_picard_threefold() -> Fan {
    fan(
        3,
        &[
            &[1, 2, 3],
            &[1, 1, -1],
            &[1, -1, 1],
            &[1, -1, -1],
            &[-1, 1, 1],
            &[-1, 1, -1],
            &[-1, -1, 1],
            &[-1, -1, -1],
        ],
        &[
            &[0, 1, 2, 3],
            &[4, 5, 6, 7],
            &[0, 1, 4, 5],
            &[2, 3, 6, 7],
            &[0, 2, 4, 6],
            &[1, 3, 5, 7],
        ],
    )
}

/// The affine line with a doubled origin, presented as a quotient: the
/// plane minus the origin modulo the one-parameter group acting with
/// weights (1, -1). Not separated; the standard small non-separated
/// example.
pub fn doubled_line_presentation() -> QuotientPresentation {
    QuotientPresentation {
        n: 2,
        class_group: FinAbGroup::free(1),
        degrees: vec![vec_i64(&[1]), vec_i64(&[-1])],
        q: vec![vec_i64(&[1, 1])],
        cones: vec![vec![], vec![0], vec![1]],
    }
}

/// Resolves a presentation name.
pub fn presentation_by_name(name: &str) -> Option<QuotientPresentation> {
    match name {
        "doubled_line_presentation" => Some(doubled_line_presentation()),
        _ => None,
    }
}

/// Fixed (non-parametrized) fan names.
pub const FAN_NAMES: [&str; 5] = ["p2", "p1", "p1xp1", "wp112", "nondivisorial3"];

/// Resolves a fan name, including `hirzebruch_<a>`.
pub fn fan_by_name(name: &str) -> Option<Fan> {
    match name {
        "p2" => Some(projective_plane()),
        "p1" => Some(projective_line()),
        "p1xp1" => Some(product_of_lines()),
        "wp112" => Some(weighted_plane_112()),
        "nondivisorial3" => Some(trivial_picard_threefold()),
        _ => {
            let a = name.strip_prefix("hirzebruch_")?.parse().ok()?;
            Some(hirzebruch(a))
        }
    }
}
