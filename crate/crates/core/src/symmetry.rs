//! Syndrome canonicalization under the lattice symmetries of the torus.
//!
//! Two symmetries are handled: translations and the anti-transposition
//! (reflection along the anti-diagonal, exchanging the two torus
//! directions). Canonical representatives are minima under
//! [`syndrome_less`], where a syndrome with a detection at the first
//! differing position is the smaller one.
//!
//! Coordinates under anti-transposition, for an `L×L` lattice:
//!
//! * vertex `(r,c)` ↦ `(L−1−c, L−1−r)`
//! * face `(r,c)` ↦ `(L−2−c, L−2−r)`
//! * `h(r,c)` ↦ `v(L−2−c, L−1−r)` and `v(r,c)` ↦ `h(L−1−c, L−2−r)`
//!
//! all taken mod `L`. These make the syndrome map commute with the chain map.

use crate::code::{CodeGeometry, LogicalLabel, PauliChain, Syndrome};
use crate::error::{check_len, Error, Result};
use crate::matching::Underlying;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// A lattice symmetry: the anti-transposition (if set) followed by a
/// translation by `(dr, dc)`. Offsets are kept in `0..L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Transform {
    pub dr: usize,
    pub dc: usize,
    pub antitransposed: bool,
}

#[inline]
fn wrap(l: usize, x: isize) -> usize {
    x.rem_euclid(l as isize) as usize
}

impl Transform {
    pub const IDENTITY: Transform = Transform { dr: 0, dc: 0, antitransposed: false };

    pub fn translation(g: &CodeGeometry, dr: isize, dc: isize) -> Self {
        Transform {
            dr: wrap(g.l(), dr),
            dc: wrap(g.l(), dc),
            antitransposed: false,
        }
    }

    pub fn antitransposition() -> Self {
        Transform { dr: 0, dc: 0, antitransposed: true }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// The transform that applies `self` first and then `next`.
    pub fn then(&self, g: &CodeGeometry, next: &Transform) -> Transform {
        let l = g.l() as isize;
        let (sr, sc) = (self.dr as isize, self.dc as isize);
        let (nr, nc) = (next.dr as isize, next.dc as isize);
        // Moving an anti-transposition past a translation by (a, b) turns it
        // into a translation by (−b, −a).
        let (dr, dc) = if next.antitransposed { (nr - sc, nc - sr) } else { (nr + sr, nc + sc) };
        Transform {
            dr: dr.rem_euclid(l) as usize,
            dc: dc.rem_euclid(l) as usize,
            antitransposed: self.antitransposed != next.antitransposed,
        }
    }

    pub fn inverse(&self, g: &CodeGeometry) -> Transform {
        if self.antitransposed {
            Transform { dr: self.dc, dc: self.dr, antitransposed: true }
        } else {
            Transform::translation(g, -(self.dr as isize), -(self.dc as isize))
        }
    }

    #[inline]
    fn map_site(&self, g: &CodeGeometry, site: usize, face: bool) -> usize {
        let l = g.l() as isize;
        let (r, c) = g.coords(site);
        let (mut r, mut c) = (r as isize, c as isize);
        if self.antitransposed {
            let k = if face { 2 } else { 1 };
            (r, c) = (l - k - c, l - k - r);
        }
        g.site(r + self.dr as isize, c + self.dc as isize)
    }

    pub fn map_vertex(&self, g: &CodeGeometry, v: usize) -> usize {
        self.map_site(g, v, false)
    }

    pub fn map_face(&self, g: &CodeGeometry, f: usize) -> usize {
        self.map_site(g, f, true)
    }

    pub fn map_edge(&self, g: &CodeGeometry, e: usize) -> usize {
        let l = g.l() as isize;
        let nv = g.n_vertices();
        let horizontal = e < nv;
        let (r, c) = g.coords(if horizontal { e } else { e - nv });
        let (mut r, mut c) = (r as isize, c as isize);
        let mut horizontal_out = horizontal;
        if self.antitransposed {
            if horizontal {
                (r, c) = (l - 2 - c, l - 1 - r);
            } else {
                (r, c) = (l - 1 - c, l - 2 - r);
            }
            horizontal_out = !horizontal;
        }
        let (r, c) = (r + self.dr as isize, c + self.dc as isize);
        if horizontal_out {
            g.h_edge(r, c)
        } else {
            g.v_edge(r, c)
        }
    }

    pub fn apply_syndrome(&self, g: &CodeGeometry, s: &Syndrome) -> Result<Syndrome> {
        check_len(g.syndrome_len(), s.len())?;
        let nv = g.n_vertices();
        let mut out = Syndrome::zeros(s.len());
        for i in s.bits().iter_ones() {
            let j = if i < nv { self.map_vertex(g, i) } else { nv + self.map_face(g, i - nv) };
            out.flip(j);
        }
        Ok(out)
    }

    pub fn apply_chain(&self, g: &CodeGeometry, chain: &PauliChain) -> Result<PauliChain> {
        check_len(g.n_edges(), chain.len())?;
        let mut out = PauliChain::identity(chain.len());
        for e in chain.x_support().iter_ones() {
            out.apply_x(self.map_edge(g, e));
        }
        for e in chain.z_support().iter_ones() {
            out.apply_z(self.map_edge(g, e));
        }
        Ok(out)
    }
}

/// `s1 < s2` in the lexicographic syndrome order: at the first index where
/// they differ, `s1` has the detection. Equal syndromes are not less.
pub fn syndrome_less(s1: &Syndrome, s2: &Syndrome) -> Result<bool> {
    check_len(s1.len(), s2.len())?;
    Ok(s1.bits().lex_cmp(s2.bits()) == Ordering::Less)
}

pub fn translate_syndrome(g: &CodeGeometry, s: &Syndrome, dr: isize, dc: isize) -> Result<Syndrome> {
    Transform::translation(g, dr, dc).apply_syndrome(g, s)
}

pub fn translate_chain(g: &CodeGeometry, c: &PauliChain, dr: isize, dc: isize) -> Result<PauliChain> {
    Transform::translation(g, dr, dc).apply_chain(g, c)
}

pub fn antitranspose_syndrome(g: &CodeGeometry, s: &Syndrome) -> Result<Syndrome> {
    Transform::antitransposition().apply_syndrome(g, s)
}

pub fn antitranspose_chain(g: &CodeGeometry, c: &PauliChain) -> Result<PauliChain> {
    Transform::antitransposition().apply_chain(g, c)
}

/// Compares the translates of `s` that move `a` and `b` (sites of the block
/// starting at `base`) to the origin, reading bits only until the first
/// difference.
fn compare_translates(g: &CodeGeometry, s: &Syndrome, a: (usize, usize), b: (usize, usize)) -> Ordering {
    let l = g.l();
    let nv = g.n_vertices();
    for block in [0, nv] {
        for r in 0..l {
            let ra = (r + a.0) % l;
            let rb = (r + b.0) % l;
            for c in 0..l {
                let x = s.get(block + ra * l + (c + a.1) % l);
                let y = s.get(block + rb * l + (c + b.1) % l);
                if x != y {
                    return if x { Ordering::Less } else { Ordering::Greater };
                }
            }
        }
    }
    Ordering::Equal
}

/// Translation representative: the minimum over all translates that put a
/// vertex detection at the origin (or, without vertex detections, a
/// plaquette detection at the first face). Ties keep the earliest detection.
pub fn center(g: &CodeGeometry, s: &Syndrome) -> Result<(Syndrome, Transform)> {
    check_len(g.syndrome_len(), s.len())?;
    let mut candidates = s.vertex_detections();
    if candidates.is_empty() {
        candidates = s.plaquette_detections();
    }
    let Some((&first, rest)) = candidates.split_first() else {
        return Ok((s.clone(), Transform::IDENTITY));
    };
    let mut best = g.coords(first);
    for &site in rest {
        let cand = g.coords(site);
        if compare_translates(g, s, cand, best) == Ordering::Less {
            best = cand;
        }
    }
    let t = Transform::translation(g, -(best.0 as isize), -(best.1 as isize));
    Ok((t.apply_syndrome(g, s)?, t))
}

/// The smaller of `s` and its anti-transpose; `s` itself on a tie.
pub fn antitransposition_representant(g: &CodeGeometry, s: &Syndrome) -> Result<(Syndrome, Transform)> {
    let flipped = antitranspose_syndrome(g, s)?;
    if syndrome_less(&flipped, s)? {
        Ok((flipped, Transform::antitransposition()))
    } else {
        Ok((s.clone(), Transform::IDENTITY))
    }
}

/// Representative under translations combined with anti-transposition:
/// the smaller of `center(s)` and `center(antitranspose(center(s)))`,
/// preferring the former on a tie.
pub fn align(g: &CodeGeometry, s: &Syndrome) -> Result<(Syndrome, Transform)> {
    let (centered, t1) = center(g, s)?;
    let flipped = antitranspose_syndrome(g, &centered)?;
    let (flipped_centered, t2) = center(g, &flipped)?;
    if syndrome_less(&flipped_centered, &centered)? {
        let t = t1.then(g, &Transform::antitransposition()).then(g, &t2);
        Ok((flipped_centered, t))
    } else {
        Ok((centered, t1))
    }
}

/// Maps a logical label through a lattice transform. Translations leave it
/// alone; the anti-transposition exchanges qubit 1 and qubit 2.
pub fn relabel_logical(label: LogicalLabel, t: &Transform) -> LogicalLabel {
    if !t.antitransposed {
        return label;
    }
    let v = label.value();
    let swapped = ((v & 0b0011) << 2) | ((v & 0b1100) >> 2);
    LogicalLabel::new(swapped).expect("4-bit label")
}

/// Which symmetries a decoder folds out before decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryMode {
    None,
    Center,
    Align,
}

impl SymmetryMode {
    pub fn canonicalize(self, g: &CodeGeometry, s: &Syndrome) -> Result<(Syndrome, Transform)> {
        match self {
            SymmetryMode::None => {
                check_len(g.syndrome_len(), s.len())?;
                Ok((s.clone(), Transform::IDENTITY))
            }
            SymmetryMode::Center => center(g, s),
            SymmetryMode::Align => align(g, s),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryMode::None => "none",
            SymmetryMode::Center => "center",
            SymmetryMode::Align => "align",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            SymmetryMode::None => 0,
            SymmetryMode::Center => 1,
            SymmetryMode::Align => 2,
        }
    }

    pub(crate) fn from_code(c: u8) -> Result<Self> {
        match c {
            0 => Ok(SymmetryMode::None),
            1 => Ok(SymmetryMode::Center),
            2 => Ok(SymmetryMode::Align),
            _ => Err(Error::Format(format!("unknown symmetry mode code {c}"))),
        }
    }
}

impl fmt::Display for SymmetryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SymmetryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SymmetryMode::None),
            "center" => Ok(SymmetryMode::Center),
            "align" => Ok(SymmetryMode::Align),
            _ => Err(Error::InvalidArgument(format!("unknown symmetry mode '{s}'"))),
        }
    }
}

/// Canonicalizes `s`, decodes the representative with `decoder`, and maps
/// the recovery back onto the original syndrome.
pub fn wrapped_decode(
    g: &CodeGeometry,
    decoder: Underlying,
    mode: SymmetryMode,
    s: &Syndrome,
) -> Result<PauliChain> {
    let (canonical, t) = mode.canonicalize(g, s)?;
    let r = decoder.decode(g, &canonical)?;
    if t.is_identity() {
        return Ok(r);
    }
    t.inverse(g).apply_chain(g, &r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Logical;
    use crate::noise::{rng_stream, sample_error};
    use rand::Rng;

    fn syn(bits: &[u8]) -> Syndrome {
        Syndrome::from_bits(crate::bits::BitVec::from_bools(bits.iter().map(|&b| b == 1)))
    }

    #[test]
    fn less_examples() {
        let a = syn(&[1, 0, 0, 0]);
        let b = syn(&[0, 1, 0, 0]);
        assert!(syndrome_less(&a, &b).unwrap());
        assert!(!syndrome_less(&b, &a).unwrap());
        assert!(!syndrome_less(&a, &a).unwrap());
        assert!(syndrome_less(&a, &syn(&[1, 0])).is_err());
    }

    #[test]
    fn less_is_strict_total_order_on_4_bits() {
        let all: Vec<Syndrome> = (0..16u8)
            .map(|v| syn(&[v & 1, (v >> 1) & 1, (v >> 2) & 1, (v >> 3) & 1]))
            .collect();
        for a in &all {
            for b in &all {
                let ab = syndrome_less(a, b).unwrap();
                let ba = syndrome_less(b, a).unwrap();
                assert!(!(ab && ba));
                assert_eq!(a == b, !ab && !ba);
            }
        }
    }

    #[test]
    fn transform_group_laws() {
        let g = CodeGeometry::new(5).unwrap();
        let mut rng = rng_stream(5, 0);
        let random_t = |rng: &mut rand_chacha::ChaCha8Rng| Transform {
            dr: rng.gen_range(0..5),
            dc: rng.gen_range(0..5),
            antitransposed: rng.gen_bool(0.5),
        };
        for _ in 0..500 {
            let (a, b) = (random_t(&mut rng), random_t(&mut rng));
            let e = sample_error(&g, 0.2, &mut rng);
            let ab = a.then(&g, &b).apply_chain(&g, &e).unwrap();
            let seq = b.apply_chain(&g, &a.apply_chain(&g, &e).unwrap()).unwrap();
            assert_eq!(ab, seq);
            assert!(a.then(&g, &a.inverse(&g)).is_identity());
            assert!(a.inverse(&g).then(&g, &a).is_identity());
        }
    }

    #[test]
    fn translation_examples() {
        let g = CodeGeometry::new(5).unwrap();
        let mut rng = rng_stream(6, 0);
        for _ in 0..200 {
            let s = g.syndrome_of(&sample_error(&g, 0.1, &mut rng)).unwrap();
            assert_eq!(translate_syndrome(&g, &s, 0, 0).unwrap(), s);
            let (dr, dc) = (rng.gen_range(0..5), rng.gen_range(0..5));
            let t = translate_syndrome(&g, &s, dr, dc).unwrap();
            assert_eq!(t.detection_count(), s.detection_count());
            assert_eq!(translate_syndrome(&g, &t, 5 - dr, 5 - dc).unwrap(), s);
        }
    }

    #[test]
    fn antitransposition_is_involution() {
        let g = CodeGeometry::new(4).unwrap();
        let mut rng = rng_stream(7, 0);
        for _ in 0..200 {
            let e = sample_error(&g, 0.2, &mut rng);
            let s = g.syndrome_of(&e).unwrap();
            let a = antitranspose_syndrome(&g, &s).unwrap();
            assert_eq!(antitranspose_syndrome(&g, &a).unwrap(), s);
            assert_eq!(a.vertex_detections().len(), s.vertex_detections().len());
            assert_eq!(a.plaquette_detections().len(), s.plaquette_detections().len());
            assert_eq!(antitranspose_chain(&g, &antitranspose_chain(&g, &e).unwrap()).unwrap(), e);
        }
    }

    #[test]
    fn syndrome_map_commutes_with_chain_map() {
        for l in 2..=6 {
            let g = CodeGeometry::new(l).unwrap();
            let mut rng = rng_stream(l as u64, 1);
            for _ in 0..200 {
                let e = sample_error(&g, 0.2, &mut rng);
                let t = Transform {
                    dr: rng.gen_range(0..l),
                    dc: rng.gen_range(0..l),
                    antitransposed: rng.gen_bool(0.5),
                };
                let via_chain = g.syndrome_of(&t.apply_chain(&g, &e).unwrap()).unwrap();
                let via_syndrome = t.apply_syndrome(&g, &g.syndrome_of(&e).unwrap()).unwrap();
                assert_eq!(via_chain, via_syndrome);
            }
        }
    }

    #[test]
    fn vertex_antitransposition_formula() {
        let g = CodeGeometry::new(4).unwrap();
        let t = Transform::antitransposition();
        // (0,1) -> (2,3)
        assert_eq!(t.map_vertex(&g, 1), 11);
    }

    #[test]
    fn center_examples() {
        let g = CodeGeometry::new(5).unwrap();
        let (c, t) = center(&g, &Syndrome::zeros(50)).unwrap();
        assert!(c.is_trivial());
        assert!(t.is_identity());
        let mut s = Syndrome::zeros(50);
        s.flip(17);
        s.flip(30);
        s.flip(41);
        let (c, _) = center(&g, &s).unwrap();
        assert_eq!(c.vertex_detections(), vec![0]);
        // plaquette-only syndrome lands on the first face
        let mut s = Syndrome::zeros(50);
        s.flip(25 + 8);
        s.flip(25 + 13);
        let (c, _) = center(&g, &s).unwrap();
        assert!(c.get(25));
    }

    #[test]
    fn relabel_examples() {
        let g = CodeGeometry::new(3).unwrap();
        let at = Transform::antitransposition();
        let tr = Transform::translation(&g, 1, 2);
        for label in LogicalLabel::all() {
            assert_eq!(relabel_logical(label, &tr), label);
            assert_eq!(relabel_logical(relabel_logical(label, &at), &at), label);
        }
        assert_eq!(relabel_logical(LogicalLabel::IDENTITY, &at), LogicalLabel::IDENTITY);
        assert_eq!(relabel_logical(LogicalLabel::new(0b0001).unwrap(), &at).value(), 0b0100);
        assert_eq!(relabel_logical(LogicalLabel::new(0b1000).unwrap(), &at).value(), 0b0010);
    }

    #[test]
    fn relabel_matches_chain_antitransposition() {
        for l in [2, 3, 4] {
            let g = CodeGeometry::new(l).unwrap();
            for label in LogicalLabel::all() {
                let c = g.logical_correction(label);
                let moved = antitranspose_chain(&g, &c).unwrap();
                assert_eq!(
                    g.logical_class(&moved).unwrap(),
                    relabel_logical(g.logical_class(&c).unwrap(), &Transform::antitransposition())
                );
                let shifted = translate_chain(&g, &c, 1, 2).unwrap();
                assert_eq!(g.logical_class(&shifted).unwrap(), label);
            }
            let z1 = g.logical_operator(Logical::Z1);
            let moved = antitranspose_chain(&g, z1).unwrap();
            assert_eq!(g.logical_class(&moved).unwrap(), g.logical_class(g.logical_operator(Logical::Z2)).unwrap());
        }
    }

    #[test]
    fn wrapped_none_is_plain() {
        let g = CodeGeometry::new(5).unwrap();
        let mut rng = rng_stream(8, 0);
        for _ in 0..200 {
            let s = g.syndrome_of(&sample_error(&g, 0.1, &mut rng)).unwrap();
            for d in [Underlying::Mwpm, Underlying::Trivial] {
                assert_eq!(wrapped_decode(&g, d, SymmetryMode::None, &s).unwrap(), d.decode(&g, &s).unwrap());
                for mode in [SymmetryMode::Center, SymmetryMode::Align] {
                    let r = wrapped_decode(&g, d, mode, &s).unwrap();
                    assert_eq!(g.syndrome_of(&r).unwrap(), s);
                }
            }
        }
    }

    #[test]
    fn mode_parse() {
        assert_eq!("align".parse::<SymmetryMode>().unwrap(), SymmetryMode::Align);
        assert!("mirror".parse::<SymmetryMode>().is_err());
        for m in [SymmetryMode::None, SymmetryMode::Center, SymmetryMode::Align] {
            assert_eq!(SymmetryMode::from_code(m.code()).unwrap(), m);
        }
    }
}
