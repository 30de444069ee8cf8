//! Square-lattice torus geometry: edge qubits, stars, plaquettes, and paths.
//!
//! A `TorusLattice` of linear size `k` has `k²` vertices, `k²` faces and
//! `2k²` edges, with one qubit per edge. Indexing is fixed so that paths in
//! config files are reproducible:
//!
//! * vertices and faces are row-major: `(r, c) -> r*k + c`;
//! * horizontal edges come first: `h(r, c) = r*k + c` runs from vertex
//!   `(r, c)` to `(r, c+1 mod k)`;
//! * vertical edges follow: `v(r, c) = k² + r*k + c` runs from vertex
//!   `(r, c)` to `(r+1 mod k, c)`;
//! * face `(r, c)` is the square whose top edge is `h(r, c)`, so its
//!   boundary is `h(r, c)`, `h(r+1, c)`, `v(r, c)` and `v(r, c+1)`.
//!
//! The qubit on edge `e` is qubit `e` of any state defined on the lattice.
//! Direct paths walk vertex-to-vertex along edges; dual paths walk
//! face-to-face across edges.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Version tag for the edge-indexing convention described in the module docs.
pub const INDEXING_CONVENTION: &str = "h-first-row-major/v1";

/// A k×k square lattice with periodic boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusLattice {
    k: usize,
}

impl TorusLattice {
    /// Builds the lattice. `k = 1` is permitted for counting but star and
    /// plaquette *operators* cannot be built on it (each touches the same
    /// edge twice, making the operator trivial).
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::LatticeSize {
                k,
                reason: "linear size must be positive",
            });
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_vertices(&self) -> usize {
        self.k * self.k
    }

    pub fn n_faces(&self) -> usize {
        self.k * self.k
    }

    pub fn n_edges(&self) -> usize {
        2 * self.k * self.k
    }

    /// Number of qubits carried by the lattice (one per edge).
    pub fn n_qubits(&self) -> usize {
        self.n_edges()
    }

    /// Index of the horizontal edge leaving vertex `(r, c)` to the east.
    pub fn h_edge(&self, r: usize, c: usize) -> usize {
        (r % self.k) * self.k + (c % self.k)
    }

    /// Index of the vertical edge leaving vertex `(r, c)` to the south.
    pub fn v_edge(&self, r: usize, c: usize) -> usize {
        self.k * self.k + (r % self.k) * self.k + (c % self.k)
    }

    fn check_edge(&self, e: usize) -> Result<()> {
        if e >= self.n_edges() {
            return Err(Error::IndexOutOfRange {
                what: "edge",
                index: e,
                count: self.n_edges(),
            });
        }
        Ok(())
    }

    /// The two vertices joined by edge `e` (equal only on the k=1 torus).
    pub fn edge_endpoints(&self, e: usize) -> Result<(usize, usize)> {
        self.check_edge(e)?;
        let k = self.k;
        let (r, c, horizontal) = self.edge_coords(e);
        let a = r * k + c;
        let b = if horizontal {
            r * k + (c + 1) % k
        } else {
            ((r + 1) % k) * k + c
        };
        Ok((a, b))
    }

    /// The two faces separated by edge `e` (equal only on the k=1 torus).
    pub fn edge_faces(&self, e: usize) -> Result<(usize, usize)> {
        self.check_edge(e)?;
        let k = self.k;
        let (r, c, horizontal) = self.edge_coords(e);
        let a = r * k + c;
        let b = if horizontal {
            // h(r, c) is the top edge of face (r, c) and the bottom edge of
            // face (r-1, c).
            ((r + k - 1) % k) * k + c
        } else {
            // v(r, c) is the left edge of face (r, c) and the right edge of
            // face (r, c-1).
            r * k + (c + k - 1) % k
        };
        Ok((a, b))
    }

    /// Decomposes an edge index into `(row, col, is_horizontal)`.
    fn edge_coords(&self, e: usize) -> (usize, usize, bool) {
        let k2 = self.k * self.k;
        if e < k2 {
            (e / self.k, e % self.k, true)
        } else {
            ((e - k2) / self.k, (e - k2) % self.k, false)
        }
    }

    /// The four edges incident to vertex `s`, in east, north, west, south
    /// order. On the k=1 torus the two edges each appear twice.
    pub fn star_edges(&self, s: usize) -> Result<[usize; 4]> {
        if s >= self.n_vertices() {
            return Err(Error::IndexOutOfRange {
                what: "vertex",
                index: s,
                count: self.n_vertices(),
            });
        }
        let k = self.k;
        let (r, c) = (s / k, s % k);
        Ok([
            self.h_edge(r, c),               // east
            self.v_edge((r + k - 1) % k, c), // north
            self.h_edge(r, (c + k - 1) % k), // west
            self.v_edge(r, c),               // south
        ])
    }

    /// The four boundary edges of face `p`, in top, right, bottom, left
    /// order. On the k=1 torus the two edges each appear twice.
    pub fn boundary_edges(&self, p: usize) -> Result<[usize; 4]> {
        if p >= self.n_faces() {
            return Err(Error::IndexOutOfRange {
                what: "face",
                index: p,
                count: self.n_faces(),
            });
        }
        let k = self.k;
        let (r, c) = (p / k, p % k);
        Ok([
            self.h_edge(r, c),           // top
            self.v_edge(r, (c + 1) % k), // right
            self.h_edge((r + 1) % k, c), // bottom
            self.v_edge(r, c),           // left
        ])
    }
}

/// Whether a path runs on the direct lattice (vertex to vertex) or on the
/// dual lattice (face to face).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    Direct,
    Dual,
}

impl PathKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PathKind::Direct => "direct",
            PathKind::Dual => "dual",
        }
    }
}

/// An ordered, connected walk along lattice edges.
///
/// Construction validates connectivity: consecutive edges must share a
/// vertex (direct) or a face (dual). The walk's endpoints are derived by
/// traversal; `closed` means the walk returns to its starting site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    k: usize,
    kind: PathKind,
    edges: Vec<usize>,
    start: usize,
    end: usize,
}

impl Path {
    /// A vertex-to-vertex walk; z-type strings live on these.
    pub fn direct(lattice: &TorusLattice, edges: Vec<usize>) -> Result<Self> {
        Self::build(lattice, PathKind::Direct, edges)
    }

    /// A face-to-face walk; x-type strings live on these.
    pub fn dual(lattice: &TorusLattice, edges: Vec<usize>) -> Result<Self> {
        Self::build(lattice, PathKind::Dual, edges)
    }

    fn build(lattice: &TorusLattice, kind: PathKind, edges: Vec<usize>) -> Result<Self> {
        let (start, end) = walk_endpoints(lattice, kind, &edges)?;
        Ok(Self {
            k: lattice.k(),
            kind,
            edges,
            start,
            end,
        })
    }

    pub fn kind(&self) -> PathKind {
        self.kind
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Linear size of the lattice the path was built on.
    pub fn lattice_k(&self) -> usize {
        self.k
    }

    /// Start site (vertex for direct, face for dual).
    pub fn start(&self) -> usize {
        self.start
    }

    /// End site (vertex for direct, face for dual).
    pub fn end(&self) -> usize {
        self.end
    }

    pub fn is_closed(&self) -> bool {
        self.start == self.end
    }
}

/// Walks the edge list and returns `(start, end)` sites, validating that
/// consecutive edges are adjacent. The first edge's orientation is chosen so
/// that the walk can continue; for a single edge the canonical orientation
/// of `edge_endpoints`/`edge_faces` is used.
fn walk_endpoints(
    lattice: &TorusLattice,
    kind: PathKind,
    edges: &[usize],
) -> Result<(usize, usize)> {
    let ends = |e: usize| -> Result<(usize, usize)> {
        match kind {
            PathKind::Direct => lattice.edge_endpoints(e),
            PathKind::Dual => lattice.edge_faces(e),
        }
    };
    let first = *edges.first().ok_or(Error::EmptyPath)?;
    let (a, b) = ends(first)?;
    if edges.len() == 1 {
        return Ok((a, b));
    }
    // Report the failure point of whichever orientation got further.
    let mut fail = (0usize, edges[0], edges[1]);
    for (s0, p0) in [(a, b), (b, a)] {
        let mut pos = p0;
        let mut ok = true;
        for (i, window) in edges.windows(2).enumerate() {
            let (x, y) = ends(window[1])?;
            if pos == x {
                pos = y;
            } else if pos == y {
                pos = x;
            } else {
                if i >= fail.0 {
                    fail = (i, window[0], window[1]);
                }
                ok = false;
                break;
            }
        }
        if ok {
            return Ok((s0, pos));
        }
    }
    Err(Error::DisconnectedPath {
        kind: kind.as_str(),
        a: fail.1,
        b: fail.2,
    })
}

/// Number of edges shared by a direct path `t` and a dual path `t_dual`,
/// counted with multiplicity on both sides: an edge used `a` times by `t`
/// and `b` times by `t_dual` contributes `a·b`. The parity of this count
/// governs the commutation sign of the corresponding string operators.
pub fn crossing_count(t: &Path, t_dual: &Path) -> Result<usize> {
    if t.lattice_k() != t_dual.lattice_k() {
        return Err(Error::LatticeMismatch {
            left: t.lattice_k(),
            right: t_dual.lattice_k(),
        });
    }
    if t.kind() != PathKind::Direct {
        return Err(Error::PathKindMismatch {
            species: "crossing_count(t, ..)",
            expected: "direct",
            got: t.kind().as_str(),
        });
    }
    if t_dual.kind() != PathKind::Dual {
        return Err(Error::PathKindMismatch {
            species: "crossing_count(.., t')",
            expected: "dual",
            got: t_dual.kind().as_str(),
        });
    }
    let n_edges = 2 * t.lattice_k() * t.lattice_k();
    let mut mult = vec![0usize; n_edges];
    for &e in t.edges() {
        mult[e] += 1;
    }
    Ok(t_dual.edges().iter().map(|&e| mult[e]).sum())
}

/// Generates a random connected walk of `len` edges by stepping from site to
/// site, choosing uniformly among the four incident edges at each step.
pub fn random_path<R: Rng + ?Sized>(
    lattice: &TorusLattice,
    kind: PathKind,
    len: usize,
    rng: &mut R,
) -> Result<Path> {
    if len == 0 {
        return Err(Error::EmptyPath);
    }
    let sites = match kind {
        PathKind::Direct => lattice.n_vertices(),
        PathKind::Dual => lattice.n_faces(),
    };
    let mut pos = rng.random_range(0..sites);
    let mut edges = Vec::with_capacity(len);
    for _ in 0..len {
        let incident = match kind {
            PathKind::Direct => lattice.star_edges(pos)?,
            PathKind::Dual => lattice.boundary_edges(pos)?,
        };
        let e = incident[rng.random_range(0..4)];
        let (a, b) = match kind {
            PathKind::Direct => lattice.edge_endpoints(e)?,
            PathKind::Dual => lattice.edge_faces(e)?,
        };
        pos = if pos == a { b } else { a };
        edges.push(e);
    }
    Path::build(lattice, kind, edges)
}

/// Serializable description of a lattice and a set of paths on it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeDescription {
    pub k: usize,
    /// Indexing convention version tag; see [`INDEXING_CONVENTION`].
    pub indexing: String,
    pub paths: Vec<PathDescription>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PathDescription {
    pub kind: PathKind,
    pub edges: Vec<usize>,
    pub closed: bool,
}

impl LatticeDescription {
    pub fn new(lattice: &TorusLattice, paths: &[Path]) -> Self {
        Self {
            k: lattice.k(),
            indexing: INDEXING_CONVENTION.to_string(),
            paths: paths.iter().map(PathDescription::from).collect(),
        }
    }
}

impl From<&Path> for PathDescription {
    fn from(p: &Path) -> Self {
        Self {
            kind: p.kind(),
            edges: p.edges().to_vec(),
            closed: p.is_closed(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_follow_the_formulas() {
        for k in 1..=4 {
            let lat = TorusLattice::new(k).unwrap();
            assert_eq!(lat.n_vertices(), k * k);
            assert_eq!(lat.n_faces(), k * k);
            assert_eq!(lat.n_edges(), 2 * k * k);
        }
        assert!(TorusLattice::new(0).is_err());
    }

    #[test]
    fn k2_has_eight_qubits() {
        let lat = TorusLattice::new(2).unwrap();
        assert_eq!(lat.n_qubits(), 8);
        assert_eq!(lat.n_vertices(), 4);
        assert_eq!(lat.n_faces(), 4);
    }

    #[test]
    fn every_edge_sits_in_two_stars_and_two_plaquettes() {
        for k in 1..=4 {
            let lat = TorusLattice::new(k).unwrap();
            let mut star_count = vec![0usize; lat.n_edges()];
            let mut plaq_count = vec![0usize; lat.n_edges()];
            for s in 0..lat.n_vertices() {
                for e in lat.star_edges(s).unwrap() {
                    star_count[e] += 1;
                }
            }
            for p in 0..lat.n_faces() {
                for e in lat.boundary_edges(p).unwrap() {
                    plaq_count[e] += 1;
                }
            }
            assert!(star_count.iter().all(|&c| c == 2), "k={k}");
            assert!(plaq_count.iter().all(|&c| c == 2), "k={k}");
        }
    }

    #[test]
    fn star_plaquette_intersections_are_even() {
        for k in 2..=4 {
            let lat = TorusLattice::new(k).unwrap();
            for s in 0..lat.n_vertices() {
                let star = lat.star_edges(s).unwrap();
                for p in 0..lat.n_faces() {
                    let boundary = lat.boundary_edges(p).unwrap();
                    let shared = star.iter().filter(|e| boundary.contains(e)).count();
                    assert!(shared == 0 || shared == 2, "k={k} s={s} p={p}: {shared}");
                }
            }
        }
    }

    #[test]
    fn k1_star_touches_both_edges_twice() {
        let lat = TorusLattice::new(1).unwrap();
        let mut star = lat.star_edges(0).unwrap();
        star.sort_unstable();
        assert_eq!(star, [0, 0, 1, 1]);
    }

    #[test]
    fn endpoints_and_faces_wrap_around() {
        let lat = TorusLattice::new(2).unwrap();
        // h(0,1) connects (0,1) east to (0,0).
        assert_eq!(lat.edge_endpoints(1).unwrap(), (1, 0));
        // v(1,0) connects (1,0) south to (0,0).
        assert_eq!(lat.edge_endpoints(6).unwrap(), (2, 0));
        // h(0,0) separates faces (0,0) and (1,0).
        assert_eq!(lat.edge_faces(0).unwrap(), (0, 2));
    }

    #[test]
    fn paths_validate_connectivity() {
        let lat = TorusLattice::new(2).unwrap();
        // h(0,0) then v(0,0): share vertex (0,0).
        let p = Path::direct(&lat, vec![0, 4]).unwrap();
        assert!(!p.is_closed());
        // Two horizontal edges of row 0 close a loop around the torus.
        let loop2 = Path::direct(&lat, vec![0, 1]).unwrap();
        assert!(loop2.is_closed());
        // h(0,0) and h(1,0) share no vertex.
        assert!(Path::direct(&lat, vec![0, 2]).is_err());
        assert!(Path::direct(&lat, vec![]).is_err());
        assert!(Path::direct(&lat, vec![99]).is_err());
    }

    #[test]
    fn single_edge_path_is_open_except_on_k1() {
        let lat2 = TorusLattice::new(2).unwrap();
        assert!(!Path::direct(&lat2, vec![0]).unwrap().is_closed());
        let lat1 = TorusLattice::new(1).unwrap();
        assert!(Path::direct(&lat1, vec![0]).unwrap().is_closed());
    }

    #[test]
    fn crossing_counts_match_hand_examples() {
        let lat = TorusLattice::new(2).unwrap();
        // Disjoint: direct h(0,0); dual crossing v(1,1)=7.
        let t = Path::direct(&lat, vec![0]).unwrap();
        let tp = Path::dual(&lat, vec![7]).unwrap();
        assert_eq!(crossing_count(&t, &tp).unwrap(), 0);
        // Same two edges on both paths -> 2.
        let t = Path::direct(&lat, vec![0, 4]).unwrap();
        let tp = Path::dual(&lat, vec![0, 4]).unwrap();
        assert_eq!(crossing_count(&t, &tp).unwrap(), 2);
        // Kind mismatch and lattice mismatch are rejected.
        assert!(crossing_count(&tp, &t).is_err());
        let lat3 = TorusLattice::new(3).unwrap();
        let t3 = Path::direct(&lat3, vec![0]).unwrap();
        assert!(crossing_count(&t3, &tp).is_err());
    }

    #[test]
    fn crossing_count_uses_multiplicity() {
        let lat = TorusLattice::new(2).unwrap();
        // Direct path walking h(0,0) back and forth: edge 0 twice.
        let t = Path::direct(&lat, vec![0, 0]).unwrap();
        assert!(t.is_closed());
        let tp = Path::dual(&lat, vec![0, 4]).unwrap();
        assert_eq!(crossing_count(&t, &tp).unwrap(), 2);
    }

    #[test]
    fn random_paths_are_valid_by_construction() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for k in [2, 3] {
            let lat = TorusLattice::new(k).unwrap();
            for _ in 0..50 {
                let len = rng.random_range(1..=8);
                let p = random_path(&lat, PathKind::Direct, len, &mut rng).unwrap();
                assert_eq!(p.len(), len);
                let d = random_path(&lat, PathKind::Dual, len, &mut rng).unwrap();
                assert_eq!(d.lattice_k(), k);
            }
        }
    }

    #[test]
    fn description_round_trips_through_json() {
        let lat = TorusLattice::new(2).unwrap();
        let p = Path::dual(&lat, vec![1, 4, 0, 6]).unwrap();
        assert!(p.is_closed());
        let desc = LatticeDescription::new(&lat, &[p]);
        let text = serde_json::to_string(&desc).unwrap();
        let back: LatticeDescription = serde_json::from_str(&text).unwrap();
        assert_eq!(back.k, 2);
        assert_eq!(back.indexing, INDEXING_CONVENTION);
        assert_eq!(back.paths[0].edges, vec![1, 4, 0, 6]);
        assert!(back.paths[0].closed);
    }
}
