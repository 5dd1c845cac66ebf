//! Plain-text formats for fans, divisors, and quotient presentations.
//!
//! The fan format is line oriented:
//!
//! ```text
//! rank 2
//! rays
//! 1 0
//! 0 1
//! -1 -1
//! max_cones
//! 0 1
//! 1 2
//! 0 2
//! ```
//!
//! A lone `-` denotes a cone with no rays (the zero cone). Lines starting
//! with `#` and blank lines are ignored on input; serialization emits the
//! canonical layout above, and parse then serialize reproduces canonical
//! files byte for byte.

use crate::arith::{Int, IntVec};
use crate::divisor::WeilDivisor;
use crate::embed::QuotientPresentation;
use crate::fan::Fan;
use crate::lattice::FinAbGroup;
use num::Integer;
use std::fmt::Write as _;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, msg: msg.into() })
}

/// Content lines with their 1-based positions; comments and blanks dropped.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_int_row(line: usize, s: &str) -> Result<IntVec, ParseError> {
    s.split_whitespace()
        .map(|tok| {
            Int::from_str(tok).map_err(|_| ParseError {
                line,
                msg: format!("expected integer, found {tok:?}"),
            })
        })
        .collect()
}

type Lines<'a> = std::iter::Peekable<std::vec::IntoIter<(usize, &'a str)>>;

fn keyword_usize(it: &mut Lines<'_>, kw: &str) -> Result<usize, ParseError> {
    let (ln, line) = match it.next() {
        Some(x) => x,
        None => return err(1, format!("missing `{kw} <n>`")),
    };
    match line.strip_prefix(kw) {
        Some(rest) => rest
            .trim()
            .parse()
            .map_err(|_| ParseError { line: ln, msg: format!("bad {kw} {:?}", rest.trim()) }),
        None => err(ln, format!("expected `{kw} <n>`, found {line:?}")),
    }
}

fn section(it: &mut Lines<'_>, kw: &str) -> Result<(), ParseError> {
    match it.next() {
        Some((_, line)) if line == kw => Ok(()),
        Some((ln, other)) => err(ln, format!("expected `{kw}`, found {other:?}")),
        None => err(1, format!("missing `{kw}` section")),
    }
}

pub fn parse_fan(text: &str) -> Result<Fan, ParseError> {
    let lines = content_lines(text);
    let mut it = lines.into_iter().peekable();

    let (ln, first) = match it.next() {
        Some(x) => x,
        None => return err(1, "empty input"),
    };
    let rank: usize = match first.strip_prefix("rank") {
        Some(rest) => rest
            .trim()
            .parse()
            .map_err(|_| ParseError { line: ln, msg: format!("bad rank {:?}", rest.trim()) })?,
        None => return err(ln, "expected `rank <n>`"),
    };
    match it.next() {
        Some((_, "rays")) => {}
        Some((ln, other)) => return err(ln, format!("expected `rays`, found {other:?}")),
        None => return err(ln, "missing `rays` section"),
    }
    let mut rays: Vec<IntVec> = Vec::new();
    loop {
        match it.peek() {
            Some(&(_, "max_cones")) => {
                it.next();
                break;
            }
            Some(&(ln, line)) => {
                let row = parse_int_row(ln, line)?;
                if row.len() != rank {
                    return err(ln, format!("ray has {} coordinates, expected {rank}", row.len()));
                }
                rays.push(row);
                it.next();
            }
            None => return err(ln, "missing `max_cones` section"),
        }
    }
    let mut max_cones: Vec<Vec<usize>> = Vec::new();
    for (ln, line) in it {
        if line == "-" {
            max_cones.push(vec![]);
            continue;
        }
        let idxs: Result<Vec<usize>, _> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| ParseError {
                    line: ln,
                    msg: format!("expected ray index, found {tok:?}"),
                })
            })
            .collect();
        max_cones.push(idxs?);
    }
    Ok(Fan { rank, rays, max_cones })
}

pub fn serialize_fan(fan: &Fan) -> String {
    let mut out = String::new();
    writeln!(out, "rank {}", fan.rank).unwrap();
    writeln!(out, "rays").unwrap();
    for r in &fan.rays {
        writeln!(out, "{}", join_ints(r)).unwrap();
    }
    writeln!(out, "max_cones").unwrap();
    for c in &fan.max_cones {
        if c.is_empty() {
            writeln!(out, "-").unwrap();
        } else {
            let toks: Vec<String> = c.iter().map(|i| i.to_string()).collect();
            writeln!(out, "{}", toks.join(" ")).unwrap();
        }
    }
    out
}

fn join_ints(v: &[Int]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// Divisor files name the fan they refer to and list ray coefficients:
///
/// ```text
/// fan p2
/// coeffs 0 0 1
/// ```
pub fn parse_divisor(text: &str) -> Result<(String, WeilDivisor), ParseError> {
    let lines = content_lines(text);
    let mut it = lines.into_iter();
    let (ln, first) = match it.next() {
        Some(x) => x,
        None => return err(1, "empty input"),
    };
    let fan_name = match first.strip_prefix("fan") {
        Some(rest) if !rest.trim().is_empty() => rest.trim().to_string(),
        _ => return err(ln, "expected `fan <name>`"),
    };
    let (ln, second) = match it.next() {
        Some(x) => x,
        None => return err(ln, "missing `coeffs` line"),
    };
    let coeffs = match second.strip_prefix("coeffs") {
        Some(rest) => parse_int_row(ln, rest)?,
        None => return err(ln, "expected `coeffs <integers>`"),
    };
    if let Some((ln, extra)) = it.next() {
        return err(ln, format!("unexpected trailing content {extra:?}"));
    }
    Ok((fan_name, WeilDivisor::new(coeffs)))
}

pub fn serialize_divisor(fan_name: &str, d: &WeilDivisor) -> String {
    format!("fan {fan_name}\ncoeffs {}\n", join_ints(&d.coeffs))
}

/// Quotient presentation files list the grading group, one degree row per
/// coordinate, the torus projection rows, and the chart faces:
///
/// ```text
/// coordinates 2
/// class_rank 1
/// degrees
/// 1
/// -1
/// projection
/// 1 1
/// charts
/// -
/// 0
/// 1
/// ```
///
/// A `torsion d1 d2 ...` line directly after `class_rank` adds cyclic
/// factors Z/d1 + Z/d2 + ... (each di >= 2, d1 | d2 | ...); degree rows then
/// have one extra column per factor. `-` denotes the empty face.
pub fn parse_presentation(text: &str) -> Result<QuotientPresentation, ParseError> {
    let lines = content_lines(text);
    let mut it = lines.into_iter().peekable();

    let n = keyword_usize(&mut it, "coordinates")?;
    let free_rank = keyword_usize(&mut it, "class_rank")?;

    let mut torsion: Vec<Int> = Vec::new();
    if let Some(&(ln, line)) = it.peek() {
        if let Some(rest) = line.strip_prefix("torsion") {
            torsion = parse_int_row(ln, rest)?;
            for (i, d) in torsion.iter().enumerate() {
                if *d < Int::from(2) {
                    return err(ln, format!("torsion order {d} is below 2"));
                }
                if i > 0 && !torsion[i].is_multiple_of(&torsion[i - 1]) {
                    return err(ln, "torsion orders must form a divisibility chain");
                }
            }
            it.next();
        }
    }
    let class_group = FinAbGroup { free_rank, torsion };
    let width = class_group.coords();

    section(&mut it, "degrees")?;
    let mut degrees: Vec<IntVec> = Vec::new();
    while degrees.len() < n {
        match it.next() {
            Some((ln, line)) => {
                let row = parse_int_row(ln, line)?;
                if row.len() != width {
                    return err(
                        ln,
                        format!("degree row has {} entries, expected {width}", row.len()),
                    );
                }
                degrees.push(row);
            }
            None => return err(1, format!("expected {n} degree rows, found {}", degrees.len())),
        }
    }

    section(&mut it, "projection")?;
    let mut q: Vec<IntVec> = Vec::new();
    loop {
        match it.peek() {
            Some(&(_, "charts")) => {
                it.next();
                break;
            }
            Some(&(ln, line)) => {
                let row = parse_int_row(ln, line)?;
                if row.len() != n {
                    return err(
                        ln,
                        format!("projection row has {} entries, expected {n}", row.len()),
                    );
                }
                q.push(row);
                it.next();
            }
            None => return err(1, "missing `charts` section"),
        }
    }

    let mut cones: Vec<Vec<usize>> = Vec::new();
    for (ln, line) in it {
        if line == "-" {
            cones.push(vec![]);
            continue;
        }
        let idxs: Result<Vec<usize>, _> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| ParseError {
                    line: ln,
                    msg: format!("expected coordinate index, found {tok:?}"),
                })
            })
            .collect();
        cones.push(idxs?);
    }
    Ok(QuotientPresentation { n, class_group, degrees, q, cones })
}

pub fn serialize_presentation(qp: &QuotientPresentation) -> String {
    let mut out = String::new();
    writeln!(out, "coordinates {}", qp.n).unwrap();
    writeln!(out, "class_rank {}", qp.class_group.free_rank).unwrap();
    if !qp.class_group.torsion.is_empty() {
        writeln!(out, "torsion {}", join_ints(&qp.class_group.torsion)).unwrap();
    }
    writeln!(out, "degrees").unwrap();
    for d in &qp.degrees {
        writeln!(out, "{}", join_ints(d)).unwrap();
    }
    writeln!(out, "projection").unwrap();
    for row in &qp.q {
        writeln!(out, "{}", join_ints(row)).unwrap();
    }
    writeln!(out, "charts").unwrap();
    for f in &qp.cones {
        if f.is_empty() {
            writeln!(out, "-").unwrap();
        } else {
            let toks: Vec<String> = f.iter().map(|i| i.to_string()).collect();
            writeln!(out, "{}", toks.join(" ")).unwrap();
        }
    }
    out
}
