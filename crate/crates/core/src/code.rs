//! Toric code geometry, Pauli chains and syndromes.
//!
//! Qubits live on the `2L²` edges of an `L×L` periodic square lattice.
//! Indexing is row-major: the horizontal edge `h(r,c)` joins vertex `(r,c)`
//! to `(r,c+1)` and has index `r·L+c`; the vertical edge `v(r,c)` joins
//! `(r,c)` to `(r+1,c)` and has index `L²+r·L+c`. Face `(r,c)` is the square
//! whose top-left corner is vertex `(r,c)`.
//!
//! Star operators are X-type and detect Z components; plaquette operators are
//! Z-type and detect X components. Phases are never tracked.

use crate::bits::BitVec;
use crate::error::{check_len, Error, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub orientation: Orientation,
    pub row: usize,
    pub col: usize,
}

/// One of the four logical generators of the two encoded qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Logical {
    Z1,
    X1,
    Z2,
    X2,
}

impl Logical {
    pub const ALL: [Logical; 4] = [Logical::Z1, Logical::X1, Logical::Z2, Logical::X2];

    /// Label bit set by chains that anticommute with this operator.
    pub fn label_bit(self) -> u8 {
        match self {
            Logical::Z1 => 0,
            Logical::X1 => 1,
            Logical::Z2 => 2,
            Logical::X2 => 3,
        }
    }
}

/// Residual logical class of a cycle, one of the 16 two-qubit Paulis.
///
/// Bit 0 is set iff the chain anticommutes with `Z₁`, bit 1 with `X₁`,
/// bit 2 with `Z₂` and bit 3 with `X₂`. Composition is XOR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LogicalLabel(u8);

impl LogicalLabel {
    pub const IDENTITY: LogicalLabel = LogicalLabel(0);
    pub const COUNT: usize = 16;

    pub fn new(value: u8) -> Result<Self> {
        if (value as usize) < Self::COUNT {
            Ok(LogicalLabel(value))
        } else {
            Err(Error::InvalidArgument(format!("logical label {value} out of range")))
        }
    }

    #[inline]
    pub fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn bit(self, i: u8) -> bool {
        (self.0 >> i) & 1 == 1
    }

    pub fn compose(self, other: LogicalLabel) -> LogicalLabel {
        LogicalLabel(self.0 ^ other.0)
    }

    pub fn all() -> impl Iterator<Item = LogicalLabel> {
        (0..Self::COUNT as u8).map(LogicalLabel)
    }
}

impl fmt::Display for LogicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A phase-free Pauli operator on the code qubits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliChain {
    x: BitVec,
    z: BitVec,
}

impl PauliChain {
    pub fn identity(n_edges: usize) -> Self {
        PauliChain {
            x: BitVec::zeros(n_edges),
            z: BitVec::zeros(n_edges),
        }
    }

    pub fn from_supports(x: BitVec, z: BitVec) -> Result<Self> {
        check_len(x.len(), z.len())?;
        Ok(PauliChain { x, z })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x_support(&self) -> &BitVec {
        &self.x
    }

    pub fn z_support(&self) -> &BitVec {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.not_any() && self.z.not_any()
    }

    /// Multiplies an X onto edge `e` in place.
    #[inline]
    pub fn apply_x(&mut self, e: usize) {
        self.x.flip(e);
    }

    #[inline]
    pub fn apply_z(&mut self, e: usize) {
        self.z.flip(e);
    }

    /// Number of edges carrying a non-identity Pauli.
    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn multiply(&self, other: &PauliChain) -> Result<PauliChain> {
        let mut out = self.clone();
        out.mul_assign(other)?;
        Ok(out)
    }

    pub fn mul_assign(&mut self, other: &PauliChain) -> Result<()> {
        check_len(self.len(), other.len())?;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
        Ok(())
    }

    /// Symplectic product test: true iff `|a.x ∩ b.z| + |a.z ∩ b.x|` is even.
    pub fn commutes(&self, other: &PauliChain) -> Result<bool> {
        check_len(self.len(), other.len())?;
        Ok(self.x.and_parity(&other.z) == self.z.and_parity(&other.x))
    }
}

impl fmt::Debug for PauliChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliChain {{ x: {:?}, z: {:?} }}", self.x, self.z)
    }
}

/// Stabilizer measurement outcomes: `L²` vertex bits followed by `L²`
/// plaquette bits, each block ordered row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Syndrome {
    bits: BitVec,
}

impl Syndrome {
    pub fn zeros(len: usize) -> Self {
        Syndrome {
            bits: BitVec::zeros(len),
        }
    }

    pub fn from_bits(bits: BitVec) -> Self {
        Syndrome { bits }
    }

    pub fn bits(&self) -> &BitVec {
        &self.bits
    }

    pub fn into_bits(self) -> BitVec {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.bits.flip(i)
    }

    /// True when no stabilizer is flagged.
    pub fn is_trivial(&self) -> bool {
        self.bits.not_any()
    }

    pub fn detection_count(&self) -> usize {
        self.bits.count_ones()
    }

    /// Vertex indices (in `0..L²`) with a detection, ascending.
    pub fn vertex_detections(&self) -> Vec<usize> {
        let half = self.len() / 2;
        self.bits.iter_ones().take_while(|&i| i < half).collect()
    }

    /// Face indices (in `0..L²`) with a detection, ascending.
    pub fn plaquette_detections(&self) -> Vec<usize> {
        let half = self.len() / 2;
        self.bits
            .iter_ones()
            .skip_while(|&i| i < half)
            .map(|i| i - half)
            .collect()
    }

    pub fn xor(&self, other: &Syndrome) -> Result<Syndrome> {
        check_len(self.len(), other.len())?;
        let mut bits = self.bits.clone();
        bits.xor_assign(&other.bits);
        Ok(Syndrome { bits })
    }
}

impl fmt::Debug for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Syndrome({:?})", self.bits)
    }
}

/// Geometry of the `L×L` toric code. Immutable once built.
#[derive(Clone, Debug)]
pub struct CodeGeometry {
    l: usize,
    logicals: [PauliChain; 4],
}

impl PartialEq for CodeGeometry {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l
    }
}

impl Eq for CodeGeometry {}

impl CodeGeometry {
    pub fn new(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidArgument(format!(
                "lattice size must be at least 2, got {l}"
            )));
        }
        let n = 2 * l * l;
        let row0_h: Vec<usize> = (0..l).collect();
        let col0_h: Vec<usize> = (0..l).map(|r| r * l).collect();
        let col0_v: Vec<usize> = (0..l).map(|r| l * l + r * l).collect();
        let row0_v: Vec<usize> = (0..l).map(|c| l * l + c).collect();
        let z_loop = |edges: &[usize]| PauliChain {
            x: BitVec::zeros(n),
            z: BitVec::from_indices(n, edges.iter().copied()),
        };
        let x_loop = |edges: &[usize]| PauliChain {
            x: BitVec::from_indices(n, edges.iter().copied()),
            z: BitVec::zeros(n),
        };
        // Order matches Logical::label_bit.
        let logicals = [
            z_loop(&row0_h),
            x_loop(&col0_h),
            z_loop(&col0_v),
            x_loop(&row0_v),
        ];
        Ok(CodeGeometry { l, logicals })
    }

    #[inline]
    pub fn l(&self) -> usize {
        self.l
    }

    #[inline]
    pub fn n_edges(&self) -> usize {
        2 * self.l * self.l
    }

    #[inline]
    pub fn n_vertices(&self) -> usize {
        self.l * self.l
    }

    #[inline]
    pub fn n_faces(&self) -> usize {
        self.l * self.l
    }

    #[inline]
    pub fn syndrome_len(&self) -> usize {
        2 * self.l * self.l
    }

    /// Row-major site index with periodic wraparound of signed coordinates.
    #[inline]
    pub fn site(&self, r: isize, c: isize) -> usize {
        let l = self.l as isize;
        (r.rem_euclid(l) * l + c.rem_euclid(l)) as usize
    }

    #[inline]
    pub fn coords(&self, site: usize) -> (usize, usize) {
        (site / self.l, site % self.l)
    }

    #[inline]
    pub fn h_edge(&self, r: isize, c: isize) -> usize {
        self.site(r, c)
    }

    #[inline]
    pub fn v_edge(&self, r: isize, c: isize) -> usize {
        self.n_vertices() + self.site(r, c)
    }

    pub fn edge_index(&self, e: Edge) -> Result<usize> {
        if e.row >= self.l || e.col >= self.l {
            return Err(Error::InvalidArgument(format!("edge {e:?} outside {0}x{0} lattice", self.l)));
        }
        let base = match e.orientation {
            Orientation::Horizontal => 0,
            Orientation::Vertical => self.n_vertices(),
        };
        Ok(base + e.row * self.l + e.col)
    }

    pub fn edge(&self, index: usize) -> Result<Edge> {
        if index >= self.n_edges() {
            return Err(Error::InvalidArgument(format!("edge index {index} out of range")));
        }
        let (orientation, site) = if index < self.n_vertices() {
            (Orientation::Horizontal, index)
        } else {
            (Orientation::Vertical, index - self.n_vertices())
        };
        let (row, col) = self.coords(site);
        Ok(Edge { orientation, row, col })
    }

    fn check_site(&self, what: &str, s: usize) -> Result<(isize, isize)> {
        if s >= self.n_vertices() {
            return Err(Error::InvalidArgument(format!("{what} index {s} out of range")));
        }
        let (r, c) = self.coords(s);
        Ok((r as isize, c as isize))
    }

    /// The four edges incident to vertex `v`.
    pub fn star_edges(&self, v: usize) -> Result<[usize; 4]> {
        let (r, c) = self.check_site("vertex", v)?;
        Ok([
            self.h_edge(r, c),
            self.h_edge(r, c - 1),
            self.v_edge(r, c),
            self.v_edge(r - 1, c),
        ])
    }

    /// The four edges bounding face `f`.
    pub fn plaquette_edges(&self, f: usize) -> Result<[usize; 4]> {
        let (r, c) = self.check_site("face", f)?;
        Ok([
            self.h_edge(r, c),
            self.h_edge(r + 1, c),
            self.v_edge(r, c),
            self.v_edge(r, c + 1),
        ])
    }

    /// Endpoints of an edge as vertex indices.
    #[inline]
    fn edge_vertices(&self, e: usize) -> (usize, usize) {
        let nv = self.n_vertices();
        if e < nv {
            let (r, c) = self.coords(e);
            (e, self.site(r as isize, c as isize + 1))
        } else {
            let (r, c) = self.coords(e - nv);
            (e - nv, self.site(r as isize + 1, c as isize))
        }
    }

    /// The two faces sharing an edge.
    #[inline]
    fn edge_faces(&self, e: usize) -> (usize, usize) {
        let nv = self.n_vertices();
        if e < nv {
            let (r, c) = self.coords(e);
            (e, self.site(r as isize - 1, c as isize))
        } else {
            let (r, c) = self.coords(e - nv);
            (e - nv, self.site(r as isize, c as isize - 1))
        }
    }

    pub fn star_operator(&self, v: usize) -> Result<PauliChain> {
        let mut chain = PauliChain::identity(self.n_edges());
        for e in self.star_edges(v)? {
            chain.apply_x(e);
        }
        Ok(chain)
    }

    pub fn plaquette_operator(&self, f: usize) -> Result<PauliChain> {
        let mut chain = PauliChain::identity(self.n_edges());
        for e in self.plaquette_edges(f)? {
            chain.apply_z(e);
        }
        Ok(chain)
    }

    pub fn syndrome_of(&self, chain: &PauliChain) -> Result<Syndrome> {
        check_len(self.n_edges(), chain.len())?;
        let nv = self.n_vertices();
        let mut s = Syndrome::zeros(self.syndrome_len());
        for e in chain.z.iter_ones() {
            let (a, b) = self.edge_vertices(e);
            s.flip(a);
            s.flip(b);
        }
        for e in chain.x.iter_ones() {
            let (a, b) = self.edge_faces(e);
            s.flip(nv + a);
            s.flip(nv + b);
        }
        Ok(s)
    }

    /// Fixed non-contractible loop representative.
    ///
    /// `Z₁` is Z on row 0's horizontal edges, `X₁` is X on column 0's
    /// horizontal edges, `Z₂` is Z on column 0's vertical edges and `X₂` is X
    /// on row 0's vertical edges.
    pub fn logical_operator(&self, which: Logical) -> &PauliChain {
        &self.logicals[which.label_bit() as usize]
    }

    pub fn logical_class(&self, chain: &PauliChain) -> Result<LogicalLabel> {
        if !self.syndrome_of(chain)?.is_trivial() {
            return Err(Error::Precondition(
                "logical class requested for a chain with nonzero syndrome".into(),
            ));
        }
        Ok(self.logical_class_unchecked(chain))
    }

    /// Anticommutation pattern with the four logical loops, without checking
    /// that `chain` is a cycle.
    pub fn logical_class_unchecked(&self, chain: &PauliChain) -> LogicalLabel {
        let mut v = 0u8;
        for (i, op) in self.logicals.iter().enumerate() {
            let anti = chain.x.and_parity(&op.z) != chain.z.and_parity(&op.x);
            if anti {
                v |= 1 << i;
            }
        }
        LogicalLabel(v)
    }

    /// Product of logical loops whose logical class is `label`.
    pub fn logical_correction(&self, label: LogicalLabel) -> PauliChain {
        let mut chain = PauliChain::identity(self.n_edges());
        // A chain anticommuting with Z₁ carries an X₁, and so on.
        let partners = [Logical::X1, Logical::Z1, Logical::X2, Logical::Z2];
        for (bit, op) in partners.into_iter().enumerate() {
            if label.bit(bit as u8) {
                chain.mul_assign(self.logical_operator(op)).expect("same geometry");
            }
        }
        chain
    }

    /// True iff `error · recovery` is in the stabilizer group.
    pub fn is_success(&self, error: &PauliChain, recovery: &PauliChain) -> Result<bool> {
        let product = error.multiply(recovery)?;
        if !self.syndrome_of(&product)?.is_trivial() {
            return Err(Error::Precondition(
                "recovery does not match the error syndrome".into(),
            ));
        }
        Ok(self.logical_class_unchecked(&product) == LogicalLabel::IDENTITY)
    }
}
