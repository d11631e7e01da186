//! Octahedral decomposition of the closed diagram, its collapse along the
//! cut segment, gluing matrices, meridians and flattenings.
//!
//! Every crossing carries an octahedron split into four tetrahedra, one per
//! corner. A corner tetrahedron has the apices `T`, `B` of the octahedron and
//! the equatorial vertices `Ea`, `Eb` sitting on the corner's first and
//! second half-edge. Its six edges are listed in [`TET_EDGES`]; by default
//! the vertical and horizontal pair carries z, the next pair z' and the last
//! pair z''.

use std::collections::{BTreeMap, VecDeque};
use std::path::Path;

use petgraph::unionfind::UnionFind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot_diagram::{OpenDiagram, Position};
use crate::numerics::{det_complex, solve_integer_affine, CMatrix, IntegerMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EdgeKind {
    C,
    R,
    O,
    U,
}

/// Edge class of the octahedral decomposition: a crossing, region,
/// over-arc or under-arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeClass {
    pub kind: EdgeKind,
    pub index: usize,
}

impl EdgeClass {
    pub fn new(kind: EdgeKind, index: usize) -> Self {
        EdgeClass { kind, index }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Vertex {
    T,
    B,
    Ea,
    Eb,
}

use Vertex::{Ea, Eb, B, T};

/// Edges of a corner tetrahedron; edge `k` carries parameter `k / 2`
/// (0 = z, 1 = z', 2 = z'') under the default quad type.
pub const TET_EDGES: [(Vertex, Vertex); 6] = [(T, B), (Ea, Eb), (T, Ea), (B, Eb), (T, Eb), (B, Ea)];

fn edge_slot(a: Vertex, b: Vertex) -> usize {
    TET_EDGES.iter().position(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)).expect("distinct vertices span an edge")
}

pub fn quad_of_slot(k: usize) -> usize {
    k / 2
}

/// Tetrahedron of the octahedral decomposition at corner `corner` of `crossing`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OctaTet {
    pub crossing: usize,
    pub corner: usize,
    pub slots: (usize, usize),
    pub classes: [EdgeClass; 6],
}

/// Gluing of face `faces[0]` of `tets[0]` to `faces[1]` of `tets[1]`,
/// vertex by vertex. `signs` is +1 for a face in the upper half of its
/// octahedron, -1 for the lower half and 0 for the vertical faces inside
/// one octahedron.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FacePairing {
    pub tets: [usize; 2],
    pub faces: [[Vertex; 3]; 2],
    pub signs: [i8; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OctahedralComplex {
    pub n_crossings: usize,
    pub tets: Vec<OctaTet>,
    pub pairings: Vec<FacePairing>,
    /// Number of C, R, O and U classes.
    pub class_counts: [usize; 4],
    /// Edge classes produced by the face pairings.
    pub n_edge_classes: usize,
}

impl OctahedralComplex {
    fn class_offset(&self, kind: EdgeKind) -> usize {
        let c = &self.class_counts;
        match kind {
            EdgeKind::C => 0,
            EdgeKind::R => c[0],
            EdgeKind::O => c[0] + c[1],
            EdgeKind::U => c[0] + c[1] + c[2],
        }
    }

    fn global(&self, e: EdgeClass) -> usize {
        self.class_offset(e.kind) + e.index
    }

    pub fn n_classes(&self) -> usize {
        self.class_counts.iter().sum()
    }

    /// ⟨f, e⟩ for every class of the uncollapsed complex; `f` has one
    /// triple per corner tetrahedron.
    pub fn pairing(&self, f: &Flattening) -> BTreeMap<EdgeClass, i64> {
        let mut out = BTreeMap::new();
        for (t, tet) in self.tets.iter().enumerate() {
            let triple = f.triple(t);
            for (k, cl) in tet.classes.iter().enumerate() {
                *out.entry(*cl).or_insert(0) += triple[quad_of_slot(k)];
            }
        }
        out
    }
}

/// Octahedra at the crossings of the closure, glued along segments.
pub fn octahedral_decomposition(d: &OpenDiagram) -> Result<OctahedralComplex> {
    let n = d.n_crossings();
    let arcs = &d.arcs;
    let mut tets = Vec::with_capacity(4 * n);
    for c in 0..n {
        for j in 0..4 {
            let (a, b) = (j, (j + 1) % 4);
            let mut classes = [EdgeClass::new(EdgeKind::C, c); 6];
            classes[edge_slot(Ea, Eb)] = EdgeClass::new(EdgeKind::R, d.region_at(c, j));
            for (v, h) in [(Ea, a), (Eb, b)] {
                let seg = &d.segments[d.segment_at(c, h)];
                if d.is_over(c, h) {
                    classes[edge_slot(T, v)] = EdgeClass::new(EdgeKind::U, seg.under_arc);
                    classes[edge_slot(B, v)] = EdgeClass::new(EdgeKind::U, arcs.under_at[c]);
                } else {
                    classes[edge_slot(T, v)] = EdgeClass::new(EdgeKind::O, arcs.over_at[c]);
                    classes[edge_slot(B, v)] = EdgeClass::new(EdgeKind::O, seg.over_arc);
                }
            }
            tets.push(OctaTet { crossing: c, corner: j, slots: (a, b), classes });
        }
    }

    let mut pairings = Vec::with_capacity(8 * n);
    // vertical faces inside each octahedron
    for c in 0..n {
        for j in 0..4 {
            pairings.push(FacePairing {
                tets: [4 * c + j, 4 * c + (j + 1) % 4],
                faces: [[T, B, Eb], [T, B, Ea]],
                signs: [0, 0],
            });
        }
    }
    // two pairings per segment, one on each side
    let apex = |c: usize, h: usize| if d.is_over(c, h) { T } else { B };
    let sign_of = |v: Vertex| if v == T { 1 } else { -1 };
    for seg in &d.segments {
        let [p, q] = seg.ends;
        let (c1, h1, c2, h2) = (p.crossing, p.slot, q.crossing, q.slot);
        for (j1, j2) in [(h1, (h2 + 3) % 4), ((h1 + 3) % 4, h2)] {
            let (t1, t2) = (4 * c1 + j1, 4 * c2 + j2);
            let (p1, p2) = (apex(c1, h1), apex(c2, h2));
            // equatorial vertex on the segment's half-edge and the other one
            let on = |t: usize, h: usize| if tets[t].slots.0 == h { (Ea, Eb) } else { (Eb, Ea) };
            let (e1h, e1o) = on(t1, h1);
            let (e2h, e2o) = on(t2, h2);
            let same = d.is_over(c1, h1) == d.is_over(c2, h2);
            let (m_h, m_o) = if same { (e2h, e2o) } else { (e2o, e2h) };
            pairings.push(FacePairing {
                tets: [t1, t2],
                faces: [[p1, e1h, e1o], [p2, m_h, m_o]],
                signs: [sign_of(p1), sign_of(p2)],
            });
        }
    }

    let class_counts = [n, d.regions.len(), arcs.n_over, arcs.n_under];
    let mut oc = OctahedralComplex { n_crossings: n, tets, pairings, class_counts, n_edge_classes: 0 };
    oc.n_edge_classes = verify_face_pairings(&oc)?;
    Ok(oc)
}

fn missing_vertex(face: &[Vertex; 3]) -> usize {
    [T, B, Ea, Eb].iter().position(|v| !face.contains(v)).expect("a face omits one vertex")
}

/// Checks that every face is paired exactly once and that the edge
/// identifications generated by the pairings are exactly the C/R/O/U
/// classes. Returns the number of edge classes.
pub fn verify_face_pairings(oc: &OctahedralComplex) -> Result<usize> {
    let nt = oc.tets.len();
    let mut used = vec![0u8; 4 * nt];
    let mut uf = UnionFind::<usize>::new(6 * nt);
    for p in &oc.pairings {
        for s in 0..2 {
            used[4 * p.tets[s] + missing_vertex(&p.faces[s])] += 1;
        }
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            let a = 6 * p.tets[0] + edge_slot(p.faces[0][x], p.faces[0][y]);
            let b = 6 * p.tets[1] + edge_slot(p.faces[1][x], p.faces[1][y]);
            uf.union(a, b);
        }
    }
    if let Some(k) = used.iter().position(|&u| u != 1) {
        return Err(Error::Internal(format!("face {} of tetrahedron {} paired {} times", k % 4, k / 4, used[k])));
    }
    let mut label_of_root: BTreeMap<usize, EdgeClass> = BTreeMap::new();
    for (t, tet) in oc.tets.iter().enumerate() {
        for (k, cl) in tet.classes.iter().enumerate() {
            let root = uf.find(6 * t + k);
            match label_of_root.get(&root) {
                Some(prev) if prev != cl => {
                    return Err(Error::Internal(format!("edge class mixes {prev:?} and {cl:?}")));
                }
                _ => {
                    label_of_root.insert(root, *cl);
                }
            }
        }
    }
    let mut labels: Vec<EdgeClass> = label_of_root.values().copied().collect();
    labels.sort();
    labels.dedup();
    if labels.len() != label_of_root.len() || labels.len() != oc.n_classes() {
        return Err(Error::Internal(format!(
            "{} pairing classes, {} labels, {} expected",
            label_of_root.len(),
            labels.len(),
            oc.n_classes()
        )));
    }
    Ok(labels.len())
}

/// Tetrahedron of the collapsed triangulation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tetrahedron {
    /// Index in the octahedral complex, equal to the corner index 4c + j.
    pub octa: usize,
    pub crossing: usize,
    pub position: Position,
    /// Octahedral edge class of each slot of [`TET_EDGES`].
    pub classes: [EdgeClass; 6],
    /// Collapsed edge of each slot.
    pub edges: [usize; 6],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Edge {
    /// Retained type: the largest under C < R < O, U, keeping both O and U.
    pub kinds: Vec<EdgeKind>,
    /// Octahedral classes identified into this edge.
    pub members: Vec<EdgeClass>,
    /// (tetrahedron, slot) pairs on this edge.
    pub incidences: Vec<(usize, usize)>,
}

impl Edge {
    pub fn is_ou(&self) -> bool {
        self.kinds.iter().any(|k| matches!(k, EdgeKind::O | EdgeKind::U))
    }

    pub fn has(&self, k: EdgeKind) -> bool {
        self.kinds.contains(&k)
    }

    pub fn kind_label(&self) -> String {
        self.kinds.iter().map(|k| format!("{k:?}")).collect::<Vec<_>>().join("/")
    }
}

/// Counts entering the tetrahedron formula and the disappearance tallies.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseTally {
    pub n_o: usize,
    pub n_u: usize,
    pub n_r1: usize,
    pub n_r2: usize,
    pub removed_tets: usize,
    pub removed_c: usize,
    pub removed_r: usize,
    pub removed_o: usize,
    pub removed_u: usize,
    pub ou_merges: usize,
}

impl CollapseTally {
    /// 4n - n_r1 - n_r2 - 4n_u - 4n_o + 8.
    pub fn predicted_tets(&self, n: usize) -> i64 {
        4 * n as i64 - self.n_r1 as i64 - self.n_r2 as i64 - 4 * self.n_u as i64 - 4 * self.n_o as i64 + 8
    }

    /// (name, predicted, observed) for every tally.
    pub fn checks(&self, n: usize, n_tets: usize, n_edges: usize) -> Vec<(&'static str, i64, i64)> {
        let a = (self.n_u + self.n_o) as i64;
        vec![
            ("tetrahedra", self.predicted_tets(n), n_tets as i64),
            ("edges", self.predicted_tets(n), n_edges as i64),
            ("removed tetrahedra", (self.n_r1 + self.n_r2) as i64 + 4 * a - 8, self.removed_tets as i64),
            ("removed C", a, self.removed_c as i64),
            ("removed R", a + 2, self.removed_r as i64),
            ("removed O", a - 3, self.removed_o as i64),
            ("removed U", a - 3, self.removed_u as i64),
            ("O/U merges", (self.n_r1 + self.n_r2) as i64 - 2, self.ou_merges as i64),
        ]
    }

    pub fn holds(&self, n: usize, n_tets: usize, n_edges: usize) -> bool {
        self.checks(n, n_tets, n_edges).iter().all(|(_, p, o)| p == o)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdealTriangulation {
    pub n_crossings: usize,
    pub tets: Vec<Tetrahedron>,
    /// Ordered O/U edges first, then C, then R.
    pub edges: Vec<Edge>,
    /// Collapsed edge of every surviving octahedral class.
    pub edge_of_class: BTreeMap<EdgeClass, usize>,
    /// Triangulation tetrahedron at each corner, if it survives.
    pub tet_of_corner: Vec<Option<usize>>,
    /// r1, r2, o, u.
    pub removed_classes: [EdgeClass; 4],
    pub tally: CollapseTally,
}

impl IdealTriangulation {
    pub fn n_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn n_ou(&self) -> usize {
        self.edges.iter().filter(|e| e.is_ou()).count()
    }

    pub fn edge_rows_of(&self, kind: EdgeKind) -> Vec<usize> {
        self.edges.iter().enumerate().filter(|(_, e)| !e.is_ou() && e.has(kind)).map(|(i, _)| i).collect()
    }

    /// ⟨f, e⟩ over the collapsed edges.
    pub fn pairing(&self, f: &Flattening) -> Vec<i64> {
        self.edges.iter().map(|e| e.incidences.iter().map(|&(t, k)| f.triple(t)[quad_of_slot(k)]).sum()).collect()
    }
}

/// Removes the tetrahedra on r1, r2, o and u and identifies the remaining
/// edges around the cut segment.
pub fn collapse(oc: &OctahedralComplex, d: &OpenDiagram) -> Result<IdealTriangulation> {
    let n = d.n_crossings();
    let s = d.cut_segment;
    let [p, q] = d.segments[s].ends;
    if d.is_over(p.crossing, p.slot) == d.is_over(q.crossing, q.slot) {
        return Err(Error::NonAlternatingSegment(s));
    }
    let len = d.walk.len();
    if len < 4 {
        return Err(Error::Internal("walk too short to collapse".into()));
    }
    let c1 = d.walk[1].crossing;
    let c4 = d.walk[len - 2].crossing;
    let s_inf = d.walk_segments[0];
    let s_0 = *d.walk_segments.last().expect("nonempty walk");
    let seg = |sid: usize| &d.segments[sid];
    let (r1, r2) = d.cut_regions();
    let o = seg(s).over_arc;
    let u = seg(s).under_arc;
    let dead = [
        EdgeClass::new(EdgeKind::R, r1),
        EdgeClass::new(EdgeKind::R, r2),
        EdgeClass::new(EdgeKind::O, o),
        EdgeClass::new(EdgeKind::U, u),
    ];

    let keep: Vec<usize> =
        (0..oc.tets.len()).filter(|&t| !oc.tets[t].classes.iter().any(|c| dead.contains(c))).collect();

    let mut uf = UnionFind::<usize>::new(oc.n_classes());
    let mut join = |a: EdgeClass, b: EdgeClass| {
        uf.union(oc.global(a), oc.global(b));
    };
    join(EdgeClass::new(EdgeKind::C, c1), EdgeClass::new(EdgeKind::U, d.arcs.under_at[c1]));
    join(EdgeClass::new(EdgeKind::C, c4), EdgeClass::new(EdgeKind::O, d.arcs.over_at[c4]));
    for r in d.segment_regions(s_inf) {
        join(EdgeClass::new(EdgeKind::R, r), EdgeClass::new(EdgeKind::O, seg(s_inf).over_arc));
    }
    for r in d.segment_regions(s_0) {
        join(EdgeClass::new(EdgeKind::R, r), EdgeClass::new(EdgeKind::U, seg(s_0).under_arc));
    }
    for sid in 0..d.segments.len() {
        if sid == s {
            continue;
        }
        let rs = d.segment_regions(sid);
        if rs.contains(&r1) || rs.contains(&r2) {
            join(EdgeClass::new(EdgeKind::O, seg(sid).over_arc), EdgeClass::new(EdgeKind::U, seg(sid).under_arc));
        }
    }

    let all_classes: Vec<EdgeClass> = [EdgeKind::C, EdgeKind::R, EdgeKind::O, EdgeKind::U]
        .iter()
        .zip(oc.class_counts)
        .flat_map(|(&k, cnt)| (0..cnt).map(move |i| EdgeClass::new(k, i)))
        .collect();

    // group incidences of the kept tetrahedra by root
    let mut groups: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (ti, &t) in keep.iter().enumerate() {
        for (k, cl) in oc.tets[t].classes.iter().enumerate() {
            groups.entry(uf.find(oc.global(*cl))).or_default().push((ti, k));
        }
    }
    let mut edges: Vec<(usize, Edge)> = groups
        .into_iter()
        .map(|(root, incidences)| {
            let members: Vec<EdgeClass> =
                all_classes.iter().copied().filter(|c| !dead.contains(c) && uf.find(oc.global(*c)) == root).collect();
            let mut kinds: Vec<EdgeKind> =
                members.iter().map(|c| c.kind).filter(|k| matches!(k, EdgeKind::O | EdgeKind::U)).collect();
            kinds.sort();
            kinds.dedup();
            if kinds.is_empty() {
                kinds.push(members.iter().map(|c| c.kind).max().expect("edge has a member"));
            }
            (root, Edge { kinds, members, incidences })
        })
        .collect();
    let category = |e: &Edge| {
        if e.is_ou() {
            0
        } else if e.has(EdgeKind::C) {
            1
        } else {
            2
        }
    };
    edges.sort_by_key(|(_, e)| (category(e), e.members[0]));

    let mut edge_of_class = BTreeMap::new();
    for (i, (_, e)) in edges.iter().enumerate() {
        for m in &e.members {
            edge_of_class.insert(*m, i);
        }
    }
    let edges: Vec<Edge> = edges.into_iter().map(|(_, e)| e).collect();

    let mut tet_of_corner = vec![None; 4 * n];
    let mut tets: Vec<Tetrahedron> = keep
        .iter()
        .enumerate()
        .map(|(ti, &t)| {
            tet_of_corner[t] = Some(ti);
            let ot = &oc.tets[t];
            Tetrahedron {
                octa: t,
                crossing: ot.crossing,
                position: Position::from_index(ot.corner),
                classes: ot.classes,
                edges: [0; 6],
            }
        })
        .collect();
    for (i, e) in edges.iter().enumerate() {
        for &(t, k) in &e.incidences {
            tets[t].edges[k] = i;
        }
    }

    // tallies
    let count_segments = |pred: &dyn Fn(usize) -> bool| (0..d.segments.len()).filter(|&sid| pred(sid)).count();
    let survivors = |k: EdgeKind| edges.iter().filter(|e| e.has(k)).count();
    let members = |k: EdgeKind| edges.iter().flat_map(|e| &e.members).filter(|m| m.kind == k).count();
    let tally = CollapseTally {
        n_o: count_segments(&|sid| seg(sid).over_arc == o),
        n_u: count_segments(&|sid| seg(sid).under_arc == u),
        n_r1: d.regions[r1].corners.len(),
        n_r2: d.regions[r2].corners.len(),
        removed_tets: oc.tets.len() - keep.len(),
        removed_c: oc.class_counts[0] - survivors(EdgeKind::C),
        removed_r: oc.class_counts[1] - survivors(EdgeKind::R),
        removed_o: oc.class_counts[2] - members(EdgeKind::O),
        removed_u: oc.class_counts[3] - members(EdgeKind::U),
        ou_merges: members(EdgeKind::O) + members(EdgeKind::U) - edges.iter().filter(|e| e.is_ou()).count(),
    };

    Ok(IdealTriangulation { n_crossings: n, tets, edges, edge_of_class, tet_of_corner, removed_classes: dead, tally })
}

/// Integer triples (f_j, f'_j, f''_j), one per tetrahedron.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flattening {
    pub f: Vec<i64>,
    pub fp: Vec<i64>,
    pub fpp: Vec<i64>,
}

impl Flattening {
    pub fn zeros(n: usize) -> Self {
        Flattening { f: vec![0; n], fp: vec![0; n], fpp: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn triple(&self, j: usize) -> [i64; 3] {
        [self.f[j], self.fp[j], self.fpp[j]]
    }

    pub fn add_triple(&mut self, j: usize, t: [i64; 3]) {
        self.f[j] += t[0];
        self.fp[j] += t[1];
        self.fpp[j] += t[2];
    }

    pub fn plus(&self, other: &Flattening) -> Flattening {
        let add = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect();
        Flattening { f: add(&self.f, &other.f), fp: add(&self.fp, &other.fp), fpp: add(&self.fpp, &other.fpp) }
    }

    /// f_j + f'_j + f''_j for every j.
    pub fn component_sums(&self) -> Vec<i64> {
        (0..self.len()).map(|j| self.f[j] + self.fp[j] + self.fpp[j]).collect()
    }

    /// Moves the parameters of the listed tetrahedra one step along
    /// z -> z' -> z'' -> z.
    pub fn retag(&self, tets: &[usize]) -> Flattening {
        let mut out = self.clone();
        for &j in tets {
            out.f[j] = self.fp[j];
            out.fp[j] = self.fpp[j];
            out.fpp[j] = self.f[j];
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meridian {
    #[serde(rename = "C")]
    pub c: Vec<i64>,
    #[serde(rename = "Cp")]
    pub cp: Vec<i64>,
    #[serde(rename = "Cpp")]
    pub cpp: Vec<i64>,
}

/// Gluing matrices (rows = edges, columns = tetrahedra) and a meridian.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingData {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "G")]
    pub g: Vec<Vec<i64>>,
    #[serde(rename = "Gp")]
    pub gp: Vec<Vec<i64>>,
    #[serde(rename = "Gpp")]
    pub gpp: Vec<Vec<i64>>,
    pub meridian: Meridian,
    /// Edge row replaced by the meridian in the 1-loop matrix.
    pub replaced_row: usize,
}

impl GluingData {
    pub fn matrices(&self) -> [&Vec<Vec<i64>>; 3] {
        [&self.g, &self.gp, &self.gpp]
    }

    pub fn column_sums(&self) -> Vec<i64> {
        (0..self.n).map(|j| self.matrices().iter().map(|m| m.iter().map(|r| r[j]).sum::<i64>()).sum()).collect()
    }

    /// ⟨f, e_i⟩ = (G f + G' f' + G'' f'')_i.
    pub fn pairing(&self, fl: &Flattening) -> Vec<i64> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.g[i][j] * fl.f[j] + self.gp[i][j] * fl.fp[j] + self.gpp[i][j] * fl.fpp[j])
                    .sum()
            })
            .collect()
    }

    pub fn is_flattening(&self, fl: &Flattening) -> bool {
        fl.len() == self.n && fl.component_sums().iter().all(|&s| s == 1) && self.pairing(fl).iter().all(|&p| p == 2)
    }

    pub fn with_replaced_row(&self, r: usize) -> GluingData {
        GluingData { replaced_row: r, ..self.clone() }
    }

    /// Rotates the quad type of the listed tetrahedra: the new shape is
    /// w = z', so the columns move as (G, G', G'') <- (G', G'', G).
    pub fn retag(&self, tets: &[usize]) -> GluingData {
        let mut out = self.clone();
        for &j in tets {
            for i in 0..self.n {
                out.g[i][j] = self.gp[i][j];
                out.gp[i][j] = self.gpp[i][j];
                out.gpp[i][j] = self.g[i][j];
            }
            out.meridian.c[j] = self.meridian.cp[j];
            out.meridian.cp[j] = self.meridian.cpp[j];
            out.meridian.cpp[j] = self.meridian.c[j];
        }
        out
    }

    /// Checks dimensions and the six-edges-per-tetrahedron column sums.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        for (name, m) in ["G", "Gp", "Gpp"].iter().zip(self.matrices()) {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(Error::Schema(format!("{name} must be {n}x{n}")));
            }
        }
        let mer = &self.meridian;
        if [&mer.c, &mer.cp, &mer.cpp].iter().any(|v| v.len() != n) {
            return Err(Error::Schema(format!("meridian rows must have length {n}")));
        }
        if self.replaced_row >= n {
            return Err(Error::Schema(format!("replaced_row {} out of range", self.replaced_row)));
        }
        if let Some(j) = self.column_sums().iter().position(|&s| s != 6) {
            return Err(Error::Schema(format!("column {j} of G + Gp + Gpp does not sum to 6")));
        }
        Ok(())
    }

    /// Rows of the 1-loop matrix with the meridian in place of `replaced_row`,
    /// evaluated at ζ, ζ', ζ''.
    pub fn one_loop_matrix(&self, zeta: &[[C64; 3]]) -> CMatrix {
        let n = self.n;
        let mer = [&self.meridian.c, &self.meridian.cp, &self.meridian.cpp];
        CMatrix::from_fn(n, n, |i, j| {
            let coeff = |q: usize| {
                if i == self.replaced_row {
                    mer[q][j]
                } else {
                    self.matrices()[q][i][j]
                }
            };
            (0..3).map(|q| zeta[j][q] * coeff(q) as f64).sum()
        })
    }
}

/// ζ = 1/z, ζ' = 1/(1 - z), ζ'' = 1/(z(z - 1)).
pub fn zetas(z: C64) -> [C64; 3] {
    let one = C64::new(1.0, 0.0);
    [one / z, one / (one - z), one / (z * (z - one))]
}

/// Gluing matrices of the collapsed triangulation with a meridian chosen
/// among the identities z_i^{±1} z_j = 1 of the corner shapes.
pub fn gluing_data(tri: &IdealTriangulation, d: &OpenDiagram) -> Result<GluingData> {
    let n = tri.n_tets();
    if tri.edges.len() != n {
        return Err(Error::Internal(format!("{} edges for {} tetrahedra", tri.edges.len(), n)));
    }
    let mut mats = [vec![vec![0i64; n]; n], vec![vec![0i64; n]; n], vec![vec![0i64; n]; n]];
    for (i, e) in tri.edges.iter().enumerate() {
        for &(t, k) in &e.incidences {
            mats[quad_of_slot(k)][i][t] += 1;
        }
    }
    let [g, gp, gpp] = mats;
    let replaced_row = tri.edge_rows_of(EdgeKind::C).last().copied().unwrap_or(n - 1);
    let mut gd = GluingData {
        n,
        g,
        gp,
        gpp,
        meridian: Meridian { c: vec![0; n], cp: vec![0; n], cpp: vec![0; n] },
        replaced_row,
    };
    gd.meridian = select_meridian(&gd, &meridian_candidates(tri, d))?;
    Ok(gd)
}

/// Pairs (i, j, σ) with z_i^σ z_j = 1 identically in the diagram variables.
pub fn meridian_candidates(tri: &IdealTriangulation, d: &OpenDiagram) -> Vec<(usize, usize, i64)> {
    let ex: Vec<&Vec<i64>> = tri.tets.iter().map(|t| &d.corners[t.octa].shape_exponents).collect();
    let mut out = Vec::new();
    for i in 0..ex.len() {
        for j in i + 1..ex.len() {
            for sg in [1i64, -1] {
                if ex[i].iter().zip(ex[j]).all(|(a, b)| sg * a + b == 0) {
                    out.push((i, j, sg));
                }
            }
        }
    }
    out
}

pub fn meridian_row(n: usize, (i, j, sg): (usize, usize, i64)) -> Meridian {
    let mut c = vec![0; n];
    c[i] += sg;
    c[j] += 1;
    Meridian { c, cp: vec![0; n], cpp: vec![0; n] }
}

/// First candidate whose row is independent of the remaining edge rows,
/// tested at a generic point.
fn select_meridian(gd: &GluingData, cands: &[(usize, usize, i64)]) -> Result<Meridian> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6d65_7269);
    let zeta: Vec<[C64; 3]> =
        (0..gd.n).map(|_| zetas(C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.3..2.8)))).collect();
    for &cand in cands {
        let trial = GluingData { meridian: meridian_row(gd.n, cand), ..gd.clone() };
        let m = trial.one_loop_matrix(&zeta);
        let hadamard: f64 = m.row_iter().map(|r| r.norm()).product();
        if det_complex(&m).norm() > 1e-9 * hadamard {
            return Ok(trial.meridian);
        }
    }
    Err(Error::Internal(format!("none of {} meridian candidates is independent", cands.len())))
}

/// Explicit flattening of the collapsed triangulation with its transfer.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExplicitFlattening {
    /// (1,0,0) on N/S corners, (0,1,0) or (0,0,1) on E/W corners.
    pub base: Flattening,
    pub base_pairing: Vec<i64>,
    /// 3 on u_∞ and o_0, 1 on o_∞ and u_0, 2 elsewhere, summed over
    /// identified edges.
    pub expected_base: Vec<i64>,
    pub transfer: Flattening,
    /// Transfer built from the tetrahedra on the other side of each arc.
    pub alternate_transfer: Option<Flattening>,
    pub flattening: Flattening,
}

/// One transfer step: a ±1 triple pattern on two tetrahedra moving one unit
/// of ⟨·, e⟩ from edge `from` to edge `to`.
#[derive(Debug, Clone)]
struct Move {
    from: usize,
    to: usize,
    coeffs: Vec<(usize, i64)>,
}

fn transfer_moves(tri: &IdealTriangulation, d: &OpenDiagram, prefer_last: bool) -> Vec<Move> {
    let len = d.walk.len();
    let next_seg = |i: usize| if i + 1 < len { d.walk_segments[i] } else { d.cut_segment };
    let prev_seg = |i: usize| if i == 0 { d.cut_segment } else { d.walk_segments[i - 1] };
    let mut moves = Vec::new();
    for (i, v) in d.walk.iter().enumerate() {
        let (kind, a1, a2) = if v.over {
            (EdgeKind::U, d.segments[prev_seg(i)].under_arc, d.segments[next_seg(i)].under_arc)
        } else {
            (EdgeKind::O, d.segments[prev_seg(i)].over_arc, d.segments[next_seg(i)].over_arc)
        };
        let (Some(&from), Some(&to)) =
            (tri.edge_of_class.get(&EdgeClass::new(kind, a1)), tri.edge_of_class.get(&EdgeClass::new(kind, a2)))
        else {
            continue;
        };
        if from == to {
            continue;
        }
        let want: BTreeMap<EdgeClass, i64> =
            [(EdgeClass::new(kind, a1), -1), (EdgeClass::new(kind, a2), 1)].into_iter().collect();
        let mut options = Vec::new();
        for ho in (0..4).filter(|&h| h != v.slot_in && h != v.slot_out) {
            let corners = [4 * v.crossing + ho, 4 * v.crossing + (ho + 3) % 4];
            let (Some(t1), Some(t2)) = (tri.tet_of_corner[corners[0]], tri.tet_of_corner[corners[1]]) else {
                continue;
            };
            for al in [-1i64, 1] {
                for be in [-1i64, 1] {
                    let mut eff: BTreeMap<EdgeClass, i64> = BTreeMap::new();
                    for (t, co) in [(t1, al), (t2, be)] {
                        for (k, cl) in tri.tets[t].classes.iter().enumerate() {
                            let w = [0, co, -co][quad_of_slot(k)];
                            *eff.entry(*cl).or_insert(0) += w;
                        }
                    }
                    eff.retain(|_, v| *v != 0);
                    if eff == want {
                        options.push(vec![(t1, al), (t2, be)]);
                    }
                }
            }
        }
        let pick = if prefer_last { options.pop() } else { options.into_iter().next() };
        if let Some(coeffs) = pick {
            moves.push(Move { from, to, coeffs });
        }
    }
    moves
}

/// Routes the surplus of every edge with ⟨f, e⟩ > 2 to an edge with a
/// deficit along transfer moves.
fn route_transfers(n: usize, pairing: &[i64], moves: &[Move]) -> Option<Flattening> {
    let n_edges = pairing.len();
    let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); n_edges];
    for (k, m) in moves.iter().enumerate() {
        adj[m.from].push((m.to, k, 1));
        adj[m.to].push((m.from, k, -1));
    }
    let mut val = pairing.to_vec();
    let mut g = Flattening::zeros(n);
    while let Some(src) = val.iter().position(|&v| v > 2) {
        let mut prev: Vec<Option<(usize, usize, i64)>> = vec![None; n_edges];
        let mut seen = vec![false; n_edges];
        seen[src] = true;
        let mut queue = VecDeque::from([src]);
        let mut hit = None;
        while let Some(u) = queue.pop_front() {
            if val[u] < 2 {
                hit = Some(u);
                break;
            }
            for &(v, k, sg) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = Some((u, k, sg));
                    queue.push_back(v);
                }
            }
        }
        let hit = hit?;
        let mut v = hit;
        while let Some((u, k, sg)) = prev[v] {
            for &(t, co) in &moves[k].coeffs {
                g.add_triple(t, [0, sg * co, -sg * co]);
            }
            v = u;
        }
        val[src] -= 1;
        val[hit] += 1;
    }
    Some(g)
}

fn ew_other(c_corner_pos: impl Fn(usize) -> Position, h: usize) -> usize {
    let j = if !c_corner_pos((h + 3) % 4).is_vertical() { (h + 3) % 4 } else { h };
    if j == h {
        (j + 1) % 4
    } else {
        j
    }
}

/// Edge values ⟨f, e⟩ predicted for the base flattening.
pub fn expected_base_pairing(tri: &IdealTriangulation, d: &OpenDiagram) -> Vec<i64> {
    let len = d.walk.len();
    let (ci, hi) = (d.walk[1].crossing, d.walk[1].slot_in);
    let (c0, h0) = (d.walk[len - 2].crossing, d.walk[len - 2].slot_out);
    let seg = |c: usize, h: usize| &d.segments[d.segment_at(c, h)];
    let u_inf = EdgeClass::new(EdgeKind::U, d.arcs.under_at[ci]);
    let o_0 = EdgeClass::new(EdgeKind::O, d.arcs.over_at[c0]);
    let o_inf = EdgeClass::new(EdgeKind::O, seg(ci, ew_other(Position::from_index, hi)).over_arc);
    let u_0 = EdgeClass::new(EdgeKind::U, seg(c0, ew_other(Position::from_index, h0)).under_arc);
    let mut out = vec![2; tri.edges.len()];
    for (cl, delta) in [(u_inf, 1), (o_0, 1), (o_inf, -1), (u_0, -1)] {
        if let Some(&e) = tri.edge_of_class.get(&cl) {
            out[e] += delta;
        }
    }
    out
}

/// Base flattening per corner position plus the arc transfers.
pub fn explicit_flattening(tri: &IdealTriangulation, d: &OpenDiagram) -> Result<ExplicitFlattening> {
    let n = tri.n_tets();
    let mut base = Flattening::zeros(n);
    for (j, t) in tri.tets.iter().enumerate() {
        let corner = &d.corners[t.octa];
        let triple = if t.position.is_vertical() {
            [1, 0, 0]
        } else if corner.first_over {
            [0, 1, 0]
        } else {
            [0, 0, 1]
        };
        base.add_triple(j, triple);
    }
    let base_pairing = tri.pairing(&base);
    let expected_base = expected_base_pairing(tri, d);
    if base_pairing != expected_base {
        return Err(Error::FlatteningFailure(format!("base pairing {base_pairing:?} differs from {expected_base:?}")));
    }
    let transfer = route_transfers(n, &base_pairing, &transfer_moves(tri, d, false))
        .ok_or_else(|| Error::FlatteningFailure("no transfer path between arcs".into()))?;
    let alternate_transfer = route_transfers(n, &base_pairing, &transfer_moves(tri, d, true));
    let flattening = base.plus(&transfer);
    let after = tri.pairing(&flattening);
    if let Some(i) = after.iter().position(|&v| v != 2) {
        return Err(Error::FlatteningFailure(format!("edge {i} has pairing {} after transfer", after[i])));
    }
    Ok(ExplicitFlattening { base, base_pairing, expected_base, transfer, alternate_transfer, flattening })
}

/// Some integer flattening of arbitrary gluing data.
pub fn solve_flattening(gd: &GluingData) -> Result<Flattening> {
    let n = gd.n;
    let mut a = IntegerMatrix::zeros(2 * n, 3 * n);
    let mut b = vec![0i64; 2 * n];
    for j in 0..n {
        for q in 0..3 {
            a.set(j, q * n + j, 1);
        }
        b[j] = 1;
    }
    for i in 0..n {
        for (q, m) in gd.matrices().iter().enumerate() {
            for j in 0..n {
                a.set(n + i, q * n + j, m[i][j]);
            }
        }
        b[n + i] = 2;
    }
    let sol = solve_integer_affine(&a, &b).map_err(|_| Error::NoIntegerSolution)?;
    Ok(Flattening { f: sol[..n].to_vec(), fp: sol[n..2 * n].to_vec(), fpp: sol[2 * n..].to_vec() })
}

/// Adds the triple h at the two corners flanking half-edge `h` of crossing
/// `c`, moving one unit of ⟨·, e⟩ from the region before `h` (clockwise)
/// to the region after it. `f` has one triple per corner tetrahedron.
pub fn transfer_region_at(d: &OpenDiagram, f: &Flattening, c: usize, h: usize) -> Flattening {
    let (p1, p2) = if d.is_over(c, h) { ([-1, 1, 0], [1, 0, -1]) } else { ([-1, 0, 1], [1, -1, 0]) };
    let mut out = f.clone();
    out.add_triple(4 * c + (h + 3) % 4, p1);
    out.add_triple(4 * c + h, p2);
    out
}

/// Moves one unit of ⟨·, e⟩ from region `ri` to the adjacent region `rj`,
/// using the first end of a shared segment.
pub fn transfer_region(d: &OpenDiagram, f: &Flattening, ri: usize, rj: usize) -> Result<Flattening> {
    for c in 0..d.n_crossings() {
        for h in 0..4 {
            let before = d.region_at(c, (h + 3) % 4);
            let after = d.region_at(c, h);
            if before == ri && after == rj {
                return Ok(transfer_region_at(d, f, c, h));
            }
            if before == rj && after == ri {
                let back = transfer_region_at(d, &Flattening::zeros(f.len()), c, h);
                let mut out = f.clone();
                for t in 0..f.len() {
                    let [a, b, cc] = back.triple(t);
                    out.add_triple(t, [-a, -b, -cc]);
                }
                return Ok(out);
            }
        }
    }
    Err(Error::Internal(format!("regions {ri} and {rj} share no segment")))
}

/// Gluing-data file: matrices, meridian and optional shapes and flattening.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GluingFile {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "G")]
    pub g: Vec<Vec<i64>>,
    #[serde(rename = "Gp")]
    pub gp: Vec<Vec<i64>>,
    #[serde(rename = "Gpp")]
    pub gpp: Vec<Vec<i64>>,
    pub meridian: Meridian,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replaced_row: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shapes: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flattening: Option<Flattening>,
}

impl GluingFile {
    pub fn gluing_data(&self) -> Result<GluingData> {
        let gd = GluingData {
            n: self.n,
            g: self.g.clone(),
            gp: self.gp.clone(),
            gpp: self.gpp.clone(),
            meridian: self.meridian.clone(),
            replaced_row: self.replaced_row.unwrap_or(self.n.saturating_sub(1)),
        };
        gd.validate()?;
        if let Some(s) = &self.shapes {
            if s.len() != self.n {
                return Err(Error::Schema(format!("{} shapes for {} tetrahedra", s.len(), self.n)));
            }
        }
        if let Some(fl) = &self.flattening {
            if [&fl.f, &fl.fp, &fl.fpp].iter().any(|v| v.len() != self.n) {
                return Err(Error::Schema("flattening vectors have the wrong length".into()));
            }
        }
        Ok(gd)
    }

    pub fn shapes(&self) -> Option<Vec<C64>> {
        self.shapes.as_ref().map(|s| s.iter().map(|&[re, im]| C64::new(re, im)).collect())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn from_data(gd: &GluingData, shapes: Option<&[C64]>, flattening: Option<&Flattening>) -> Self {
        GluingFile {
            n: gd.n,
            g: gd.g.clone(),
            gp: gd.gp.clone(),
            gpp: gd.gpp.clone(),
            meridian: gd.meridian.clone(),
            replaced_row: Some(gd.replaced_row),
            shapes: shapes.map(|z| z.iter().map(|c| [c.re, c.im]).collect()),
            flattening: flattening.cloned(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot_diagram::{build_two_bridge, essential_corners, TwistVector};

    fn diagram(tw: &[i64]) -> OpenDiagram {
        build_two_bridge(&TwistVector::new(tw.to_vec()).unwrap()).unwrap()
    }

    fn collapsed(tw: &[i64]) -> (OpenDiagram, OctahedralComplex, IdealTriangulation) {
        let d = diagram(tw);
        let oc = octahedral_decomposition(&d).unwrap();
        let tri = collapse(&oc, &d).unwrap();
        (d, oc, tri)
    }

    #[test]
    fn six_one_octahedral_counts() {
        let d = diagram(&[4, 2]);
        let oc = octahedral_decomposition(&d).unwrap();
        assert_eq!(oc.tets.len(), 24);
        assert_eq!(oc.n_edge_classes, 26);
        assert_eq!(oc.class_counts, [6, 8, 6, 6]);
        assert_eq!(oc.pairings.len(), 48);
    }

    #[test]
    fn six_one_collapse() {
        let (d, _, tri) = collapsed(&[4, 2]);
        assert_eq!(tri.n_tets(), 8);
        assert_eq!(tri.edges.len(), 8);
        assert_eq!(tri.edge_rows_of(EdgeKind::C).len(), 2);
        assert_eq!(tri.edge_rows_of(EdgeKind::R).len(), 2);
        let ou: Vec<&Edge> = tri.edges.iter().filter(|e| e.is_ou()).collect();
        assert_eq!(ou.len(), 4);
        assert!(ou.iter().all(|e| e.has(EdgeKind::O) && e.has(EdgeKind::U)));
        let mut sizes: Vec<usize> = ou
            .iter()
            .map(|e| e.members.iter().filter(|m| matches!(m.kind, EdgeKind::O | EdgeKind::U)).count())
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 3, 3]);
        assert!(tri.tally.holds(6, tri.n_tets(), tri.edges.len()), "{:?}", tri.tally);
        let ess: Vec<usize> = d.essential_corners().map(|(k, _)| k).collect();
        let kept: Vec<usize> = tri.tets.iter().map(|t| t.octa).collect();
        assert_eq!(ess, kept);
        assert_eq!(essential_corners(&d).len(), tri.n_tets());
    }

    #[test]
    fn gluing_columns_and_meridian() {
        for tw in [[4, 2].as_slice(), &[2, 2], &[3, 1, 2], &[2, 1, 1, 2]] {
            let (d, _, tri) = collapsed(tw);
            let gd = gluing_data(&tri, &d).unwrap();
            assert!(gd.column_sums().iter().all(|&s| s == 6));
            let nz: Vec<i64> = gd.meridian.c.iter().copied().filter(|&v| v != 0).collect();
            assert_eq!(nz.len(), 2);
            assert!(nz.iter().all(|v| v.abs() == 1));
            assert!(gd.meridian.cp.iter().chain(&gd.meridian.cpp).all(|&v| v == 0));
            assert_eq!(tri.n_ou(), d.n_vars + 1);
        }
    }

    #[test]
    fn explicit_flattening_six_one() {
        let (d, _, tri) = collapsed(&[4, 2]);
        let ex = explicit_flattening(&tri, &d).unwrap();
        let gd = gluing_data(&tri, &d).unwrap();
        assert!(gd.is_flattening(&ex.flattening));
        assert!(ex.base.component_sums().iter().all(|&s| s == 1));
        for (i, e) in tri.edges.iter().enumerate() {
            if !e.is_ou() {
                assert_eq!(ex.base_pairing[i], 2);
            }
        }
        assert_eq!(ex.base_pairing, expected_base_pairing(&tri, &d));
        assert!(ex.transfer.component_sums().iter().all(|&s| s == 0));
    }

    #[test]
    fn solver_flattening_is_valid() {
        let (d, _, tri) = collapsed(&[3, 2]);
        let gd = gluing_data(&tri, &d).unwrap();
        let fl = solve_flattening(&gd).unwrap();
        assert!(gd.is_flattening(&fl));
    }

    #[test]
    fn region_transfer_effect() {
        let d = diagram(&[3, 1, 2]);
        let oc = octahedral_decomposition(&d).unwrap();
        let zero = Flattening::zeros(oc.tets.len());
        for c in 0..d.n_crossings() {
            for h in 0..4 {
                let (ri, rj) = (d.region_at(c, (h + 3) % 4), d.region_at(c, h));
                let f = transfer_region_at(&d, &zero, c, h);
                assert!(f.component_sums().iter().all(|&s| s == 0));
                let eff: BTreeMap<EdgeClass, i64> = oc.pairing(&f).into_iter().filter(|(_, v)| *v != 0).collect();
                let want: BTreeMap<EdgeClass, i64> =
                    [(EdgeClass::new(EdgeKind::R, ri), -1), (EdgeClass::new(EdgeKind::R, rj), 1)].into_iter().collect();
                assert_eq!(eff, want);
            }
        }
        let (ri, rj) = (d.region_at(0, 0), d.region_at(0, 1));
        let f = transfer_region(&d, &zero, rj, ri).unwrap();
        let eff = oc.pairing(&f);
        assert_eq!(eff[&EdgeClass::new(EdgeKind::R, rj)], -1);
        assert_eq!(eff[&EdgeClass::new(EdgeKind::R, ri)], 1);
    }

    #[test]
    fn retag_round_trip() {
        let (d, _, tri) = collapsed(&[4, 2]);
        let gd = gluing_data(&tri, &d).unwrap();
        let all: Vec<usize> = (0..gd.n).collect();
        let thrice = gd.retag(&all).retag(&all).retag(&all);
        assert_eq!(thrice, gd);
        let fl = explicit_flattening(&tri, &d).unwrap().flattening;
        assert!(gd.retag(&[0, 3]).is_flattening(&fl.retag(&[0, 3])));
    }

    #[test]
    fn gluing_file_schema() {
        let (d, _, tri) = collapsed(&[2, 2]);
        let gd = gluing_data(&tri, &d).unwrap();
        let text = serde_json::to_string(&GluingFile::from_data(&gd, None, None)).unwrap();
        let back = GluingFile::from_json(&text).unwrap().gluing_data().unwrap();
        assert_eq!(back, gd);
        assert!(matches!(GluingFile::from_json("{\"N\": 2}"), Err(Error::Schema(_))));
        let mut bad = GluingFile::from_json(&text).unwrap();
        bad.g[0][0] += 1;
        assert!(matches!(bad.gluing_data(), Err(Error::Schema(_))));
    }
}
