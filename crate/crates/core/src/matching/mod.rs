//! Underlying decoders: exact minimum-weight perfect matching and the
//! trivial consecutive-pairing decoder.
//!
//! Z and X components are decoded independently: vertex detections are
//! joined by Z chains along the primal lattice and plaquette detections by X
//! chains along the dual lattice.

pub mod blossom;

use crate::code::{CodeGeometry, PauliChain, Syndrome};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteKind {
    Vertex,
    Face,
}

/// A vertex or face of the lattice, by row-major index in `0..L²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Site {
    pub kind: SiteKind,
    pub index: usize,
}

impl Site {
    pub fn vertex(index: usize) -> Self {
        Site { kind: SiteKind::Vertex, index }
    }

    pub fn face(index: usize) -> Self {
        Site { kind: SiteKind::Face, index }
    }
}

/// Detections of a syndrome split by type, each list strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionList {
    pub vertex_detections: Vec<usize>,
    pub plaquette_detections: Vec<usize>,
}

impl DetectionList {
    pub fn from_syndrome(g: &CodeGeometry, s: &Syndrome) -> Result<Self> {
        crate::error::check_len(g.syndrome_len(), s.len())?;
        let list = DetectionList {
            vertex_detections: s.vertex_detections(),
            plaquette_detections: s.plaquette_detections(),
        };
        if list.vertex_detections.len() % 2 == 1 || list.plaquette_detections.len() % 2 == 1 {
            return Err(Error::InvalidSyndrome(format!(
                "odd detection count ({} vertex, {} plaquette)",
                list.vertex_detections.len(),
                list.plaquette_detections.len()
            )));
        }
        Ok(list)
    }
}

#[inline]
fn cyclic_gap(l: usize, a: usize, b: usize) -> usize {
    let d = a.abs_diff(b);
    d.min(l - d)
}

/// Periodic taxicab distance between two sites of the same kind.
pub fn torus_distance(g: &CodeGeometry, a: Site, b: Site) -> Result<usize> {
    if a.kind != b.kind {
        return Err(Error::InvalidArgument("distance between a vertex and a face".into()));
    }
    for s in [a, b] {
        if s.index >= g.n_vertices() {
            return Err(Error::InvalidArgument(format!("site index {} out of range", s.index)));
        }
    }
    Ok(site_distance(g, a.index, b.index))
}

#[inline]
pub(crate) fn site_distance(g: &CodeGeometry, a: usize, b: usize) -> usize {
    let (ra, ca) = g.coords(a);
    let (rb, cb) = g.coords(b);
    cyclic_gap(g.l(), ra, rb) + cyclic_gap(g.l(), ca, cb)
}

/// Signed step count along one periodic axis: the shorter way round, or the
/// non-wrapping way on a tie.
#[inline]
fn axis_steps(l: usize, from: usize, to: usize) -> isize {
    let forward = (to + l - from) % l;
    let backward = (l - forward) % l;
    if forward < backward {
        forward as isize
    } else if backward < forward {
        -(backward as isize)
    } else if to >= from {
        forward as isize
    } else {
        -(backward as isize)
    }
}

/// Multiplies onto `chain` a shortest path between two same-kind sites:
/// the row offset is walked first (in the start column), then the column
/// offset (in the target row).
pub(crate) fn apply_path(g: &CodeGeometry, kind: SiteKind, a: usize, b: usize, chain: &mut PauliChain) {
    let l = g.l();
    let (ra, ca) = g.coords(a);
    let (rb, cb) = g.coords(b);
    let dr = axis_steps(l, ra, rb);
    let dc = axis_steps(l, ca, cb);
    let (mut r, mut c) = (ra as isize, ca as isize);
    let step_r = dr.signum();
    for _ in 0..dr.unsigned_abs() {
        let e = match (kind, step_r > 0) {
            (SiteKind::Vertex, true) => g.v_edge(r, c),
            (SiteKind::Vertex, false) => g.v_edge(r - 1, c),
            (SiteKind::Face, true) => g.h_edge(r + 1, c),
            (SiteKind::Face, false) => g.h_edge(r, c),
        };
        flip(kind, chain, e);
        r += step_r;
    }
    let step_c = dc.signum();
    for _ in 0..dc.unsigned_abs() {
        let e = match (kind, step_c > 0) {
            (SiteKind::Vertex, true) => g.h_edge(r, c),
            (SiteKind::Vertex, false) => g.h_edge(r, c - 1),
            (SiteKind::Face, true) => g.v_edge(r, c + 1),
            (SiteKind::Face, false) => g.v_edge(r, c),
        };
        flip(kind, chain, e);
        c += step_c;
    }
}

#[inline]
fn flip(kind: SiteKind, chain: &mut PauliChain, e: usize) {
    match kind {
        SiteKind::Vertex => chain.apply_z(e),
        SiteKind::Face => chain.apply_x(e),
    }
}

/// Shortest chain whose syndrome is exactly `{a, b}`: a Z chain between
/// vertices or an X chain between faces.
pub fn shortest_path_chain(g: &CodeGeometry, a: Site, b: Site) -> Result<PauliChain> {
    torus_distance(g, a, b)?;
    let mut chain = PauliChain::identity(g.n_edges());
    apply_path(g, a.kind, a.index, b.index, &mut chain);
    Ok(chain)
}

/// Exact minimum-weight perfect matching of `sites` under the torus metric.
/// Returns pairs of positions into `sites`.
pub fn min_weight_perfect_matching(g: &CodeGeometry, sites: &[usize]) -> Result<Vec<(usize, usize)>> {
    let n = sites.len();
    if n % 2 == 1 {
        return Err(Error::InvalidSyndrome(format!("cannot perfectly match {n} detections")));
    }
    match n {
        0 => return Ok(Vec::new()),
        2 => return Ok(vec![(0, 1)]),
        _ => {}
    }
    // Maximize Σ(C − d) over maximum-cardinality matchings; on a complete
    // graph with even n these are exactly the perfect matchings.
    let ceiling = 2 * (g.l() / 2) as i64 + 1;
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let d = site_distance(g, sites[i], sites[j]) as i64;
            edges.push((i, j, ceiling - d));
        }
    }
    let mate = blossom::max_weight_matching(n, &edges, true);
    let mut pairs = Vec::with_capacity(n / 2);
    for (i, m) in mate.iter().enumerate() {
        let j = m.expect("complete graph on an even vertex set has a perfect matching");
        if i < j {
            pairs.push((i, j));
        }
    }
    Ok(pairs)
}

/// Sum of pair distances of a matching given as positions into `sites`.
pub fn matching_weight(g: &CodeGeometry, sites: &[usize], pairs: &[(usize, usize)]) -> usize {
    pairs.iter().map(|&(i, j)| site_distance(g, sites[i], sites[j])).sum()
}

fn decode_with<F>(g: &CodeGeometry, s: &Syndrome, pair_up: F) -> Result<PauliChain>
where
    F: Fn(&CodeGeometry, &[usize]) -> Result<Vec<(usize, usize)>>,
{
    let dets = DetectionList::from_syndrome(g, s)?;
    let mut recovery = PauliChain::identity(g.n_edges());
    for (kind, list) in [
        (SiteKind::Vertex, &dets.vertex_detections),
        (SiteKind::Face, &dets.plaquette_detections),
    ] {
        for (i, j) in pair_up(g, list)? {
            apply_path(g, kind, list[i], list[j], &mut recovery);
        }
    }
    Ok(recovery)
}

/// Minimum-weight perfect matching decoder.
pub fn mwpm_decode(g: &CodeGeometry, s: &Syndrome) -> Result<PauliChain> {
    decode_with(g, s, min_weight_perfect_matching)
}

/// Pairs detections consecutively in index order: first with second,
/// third with fourth, and so on.
pub fn trivial_decode(g: &CodeGeometry, s: &Syndrome) -> Result<PauliChain> {
    decode_with(g, s, |_, list| Ok((0..list.len() / 2).map(|k| (2 * k, 2 * k + 1)).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Underlying {
    Mwpm,
    Trivial,
}

impl Underlying {
    pub fn decode(self, g: &CodeGeometry, s: &Syndrome) -> Result<PauliChain> {
        match self {
            Underlying::Mwpm => mwpm_decode(g, s),
            Underlying::Trivial => trivial_decode(g, s),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Underlying::Mwpm => "mwpm",
            Underlying::Trivial => "trivial",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            Underlying::Mwpm => 0,
            Underlying::Trivial => 1,
        }
    }

    pub(crate) fn from_code(c: u8) -> Result<Self> {
        match c {
            0 => Ok(Underlying::Mwpm),
            1 => Ok(Underlying::Trivial),
            _ => Err(Error::Format(format!("unknown underlying decoder code {c}"))),
        }
    }
}

impl fmt::Display for Underlying {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Underlying {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mwpm" => Ok(Underlying::Mwpm),
            "trivial" => Ok(Underlying::Trivial),
            _ => Err(Error::InvalidArgument(format!("unknown underlying decoder '{s}'"))),
        }
    }
}
