//! Standard open diagrams of 2-bridge knots.
//!
//! The diagram is drawn on three columns. Twist box `i` acts on columns
//! (2,3) when `i` is even and on (1,2) when `i` is odd; a cap joins columns
//! 1 and 2 at the top and the strand on column 3 leaves through the top
//! endpoint. Half-edges at a crossing are numbered counterclockwise
//! NE=0, NW=1, SW=2, SE=3, and corner `j` sits between half-edges `j` and
//! `j+1`, giving the corners N, W, S, E.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const NE: usize = 0;
pub const NW: usize = 1;
pub const SW: usize = 2;
pub const SE: usize = 3;
const SLOT_NAMES: [&str; 4] = ["NE", "NW", "SW", "SE"];

/// Half-edge continuing the strand through a crossing.
pub const fn strand_partner(h: usize) -> usize {
    (h + 2) % 4
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Position {
    N,
    W,
    S,
    E,
}

impl Position {
    pub fn from_index(j: usize) -> Position {
        [Position::N, Position::W, Position::S, Position::E][j % 4]
    }

    pub fn is_vertical(self) -> bool {
        matches!(self, Position::N | Position::S)
    }
}

/// `A` has the NW-SE strand on top, `B` the NE-SW strand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingKind {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfEdge {
    pub crossing: usize,
    pub slot: usize,
}

impl HalfEdge {
    pub fn new(crossing: usize, slot: usize) -> Self {
        HalfEdge { crossing, slot }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Crossing {
    pub kind: CrossingKind,
    /// +1 for kind A, -1 for kind B.
    pub sign: i8,
    pub twist_box: usize,
    /// Left column of the pair of columns the crossing acts on.
    pub left_column: usize,
    /// Segment ids at NE, NW, SW, SE.
    pub segments: [usize; 4],
    /// Region ids of the N, W, S, E corners.
    pub regions: [usize; 4],
}

impl Crossing {
    pub fn is_over(&self, slot: usize) -> bool {
        match self.kind {
            CrossingKind::A => slot == NW || slot == SE,
            CrossingKind::B => slot == NE || slot == SW,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Segment {
    pub ends: [HalfEdge; 2],
    /// The cut segment of the closure, split into the two endpoint strands.
    pub cut: bool,
    pub label: SegmentLabel,
    pub over_arc: usize,
    pub under_arc: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentLabel {
    Const0,
    Const1,
    ConstInf,
    /// 1-based variable index.
    Var(usize),
}

impl SegmentLabel {
    fn is_degenerate(self) -> bool {
        matches!(self, SegmentLabel::Const0 | SegmentLabel::ConstInf)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Region {
    /// Corners (crossing, corner index) around the face.
    pub corners: Vec<(usize, usize)>,
    /// One of the two faces of the cut segment; together they form the
    /// unbounded region of the open diagram.
    pub unbounded: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Visit {
    pub crossing: usize,
    pub slot_in: usize,
    pub slot_out: usize,
    pub over: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Corner {
    pub crossing: usize,
    pub position: Position,
    /// Counterclockwise first and second half-edges of the corner.
    pub slots: (usize, usize),
    pub labels: (SegmentLabel, SegmentLabel),
    pub essential: bool,
    /// Whether the first half-edge is an overpass.
    pub first_over: bool,
    /// Exponents of x_1..x_n in the shape x_a / x_b.
    pub shape_exponents: Vec<i64>,
}

/// Validated twist vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistVector {
    entries: Vec<i64>,
}

impl TwistVector {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.contains(&0) {
            return Err(Error::InvalidTwist(format!("{entries:?} has a zero entry")));
        }
        if entries.len() < 2 {
            return Err(Error::NotHyperbolic(format!("{entries:?} is a (2,b)-torus knot")));
        }
        Ok(TwistVector { entries })
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// p/q = a1 + 1/(a2 + 1/(...)), with q >= 0.
    pub fn fraction(&self) -> (i64, i64) {
        let (mut p, mut q) = (*self.entries.last().unwrap() as i128, 1i128);
        for &a in self.entries.iter().rev().skip(1) {
            (p, q) = (a as i128 * p + q, p);
        }
        if q < 0 {
            (p, q) = (-p, -q);
        }
        (p as i64, q as i64)
    }

    /// Twist vector from a fraction via an even-length positive continued
    /// fraction. Negative fractions yield the mirror flag.
    pub fn from_fraction(p: i64, q: i64) -> Result<(TwistVector, bool)> {
        if q == 0 || p == 0 {
            return Err(Error::NotHyperbolic(format!("{p}/{q} is the unknot")));
        }
        let mirror = (p < 0) != (q < 0);
        let pp = p.unsigned_abs() as i64;
        let qq = (q.unsigned_abs() as i64).rem_euclid(pp);
        classify(pp, qq, &format!("{p}/{q}"))?;
        let mut cf = Vec::new();
        let (mut a, mut b) = (pp, qq);
        while b != 0 {
            cf.push(a / b);
            (a, b) = (b, a % b);
        }
        if cf.len() % 2 == 1 {
            let last = cf.pop().unwrap();
            cf.push(last - 1);
            cf.push(1);
        }
        Ok((TwistVector::new(cf)?, mirror))
    }

    /// Positive vector describing the same knot, plus a mirror flag.
    pub fn normalized(&self) -> Result<(TwistVector, bool)> {
        let e = &self.entries;
        let (p, q) = self.fraction();
        classify(p.abs(), q.rem_euclid(p.abs().max(1)), &format!("{e:?}"))?;
        if e.iter().all(|&a| a > 0) {
            Ok((self.clone(), false))
        } else if e.iter().all(|&a| a < 0) {
            Ok((TwistVector { entries: e.iter().map(|a| -a).collect() }, true))
        } else {
            TwistVector::from_fraction(p, q)
        }
    }
}

/// Positive twist vectors of length at least 2 with total at most
/// `max_crossings` that describe hyperbolic knots, one per reversal pair.
pub fn sweep_twist_vectors(max_crossings: usize) -> Vec<TwistVector> {
    fn extend(prefix: &mut Vec<i64>, left: i64, out: &mut Vec<Vec<i64>>) {
        if prefix.len() >= 2 {
            out.push(prefix.clone());
        }
        for a in 1..=left {
            prefix.push(a);
            extend(prefix, left - a, out);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    extend(&mut Vec::new(), max_crossings as i64, &mut all);
    all.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    all.into_iter()
        .filter(|v| {
            let rev: Vec<i64> = v.iter().rev().copied().collect();
            *v >= rev
        })
        .filter_map(|v| TwistVector::new(v).ok())
        .filter(|t| build_two_bridge(t).is_ok())
        .collect()
}

/// Rejects links, the unknot and (2,p)-torus knots.
fn classify(p: i64, q: i64, what: &str) -> Result<()> {
    if p <= 1 {
        return Err(Error::NotHyperbolic(format!("{what} is the unknot")));
    }
    if p % 2 == 0 {
        return Err(Error::Link(what.to_string()));
    }
    if (q - 1).rem_euclid(p) == 0 || (q + 1).rem_euclid(p) == 0 {
        return Err(Error::NotHyperbolic(format!("{what} is the ({p},2)-torus knot")));
    }
    Ok(())
}

/// Arc bookkeeping for the closed diagram.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Arcs {
    /// Over-arc passing over each crossing.
    pub over_at: Vec<usize>,
    /// Under-arc passing under each crossing.
    pub under_at: Vec<usize>,
    pub n_over: usize,
    pub n_under: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OpenDiagram {
    pub input: Vec<i64>,
    pub twists: Vec<i64>,
    pub fraction: (i64, i64),
    pub mirror: bool,
    pub crossings: Vec<Crossing>,
    pub segments: Vec<Segment>,
    pub regions: Vec<Region>,
    /// Cut segment s of the closure.
    pub cut_segment: usize,
    /// Half-edges at the top and bottom endpoints.
    pub endpoints: [HalfEdge; 2],
    /// Walk from the endpoint whose first crossing is an underpass.
    pub walk: Vec<Visit>,
    /// walk_segments[i] joins walk[i] and walk[i + 1].
    pub walk_segments: Vec<usize>,
    pub arcs: Arcs,
    pub n_vars: usize,
    pub corners: Vec<Corner>,
}

enum Port {
    Half(usize, usize),
    Cap(usize),
    Cup(usize),
    Top,
    Bottom,
}

/// Build and label the standard open diagram.
pub fn build_two_bridge(twists: &TwistVector) -> Result<OpenDiagram> {
    let (norm, mirror) = twists.normalized()?;
    let mut d = layout(norm.entries())?;
    d.input = twists.entries().to_vec();
    d.fraction = twists.fraction();
    d.mirror = mirror;
    label_segments(&mut d)?;
    d.corners = essential_corners_all(&d);
    Ok(d)
}

fn layout(tw: &[i64]) -> Result<OpenDiagram> {
    let mut crossings = Vec::new();
    for (b, &a) in tw.iter().enumerate() {
        let left = if b % 2 == 0 { 2 } else { 1 };
        let mut kind = if b % 2 == 0 { CrossingKind::A } else { CrossingKind::B };
        if a < 0 {
            kind = if kind == CrossingKind::A { CrossingKind::B } else { CrossingKind::A };
        }
        for _ in 0..a.unsigned_abs() {
            let sign = if kind == CrossingKind::A { 1 } else { -1 };
            crossings.push(Crossing { kind, sign, twist_box: b, left_column: left, segments: [0; 4], regions: [0; 4] });
        }
    }
    let n = crossings.len();
    // ports: 4n half-edges, then cap0, cap1, cup0, cup1, top, bottom
    let port_id = |p: Port| match p {
        Port::Half(c, h) => 4 * c + h,
        Port::Cap(i) => 4 * n + i,
        Port::Cup(i) => 4 * n + 2 + i,
        Port::Top => 4 * n + 4,
        Port::Bottom => 4 * n + 5,
    };
    let mut link = vec![usize::MAX; 4 * n + 6];
    let mut connect = |a: usize, b: usize| {
        link[a] = b;
        link[b] = a;
    };
    let mut pending = [0, port_id(Port::Cap(0)), port_id(Port::Cap(1)), port_id(Port::Top)];
    for (c, x) in crossings.iter().enumerate() {
        let l = x.left_column;
        connect(pending[l], port_id(Port::Half(c, NW)));
        connect(pending[l + 1], port_id(Port::Half(c, NE)));
        pending[l] = port_id(Port::Half(c, SW));
        pending[l + 1] = port_id(Port::Half(c, SE));
    }
    if tw.len().is_multiple_of(2) {
        connect(pending[2], port_id(Port::Cup(0)));
        connect(pending[3], port_id(Port::Cup(1)));
        connect(pending[1], port_id(Port::Bottom));
    } else {
        connect(pending[1], port_id(Port::Cup(0)));
        connect(pending[2], port_id(Port::Cup(1)));
        connect(pending[3], port_id(Port::Bottom));
    }
    let resolve = |p: usize| {
        let q = link[p];
        if (4 * n..4 * n + 4).contains(&q) {
            let other = 4 * n + ((q - 4 * n) ^ 1);
            link[other]
        } else {
            q
        }
    };
    let he = |p: usize| HalfEdge::new(p / 4, p % 4);
    let mut seg_of = vec![usize::MAX; 4 * n];
    let mut segments = Vec::new();
    let mut ends = [HalfEdge::new(0, 0); 2];
    let blank =
        |ends: [HalfEdge; 2], cut: bool| Segment { ends, cut, label: SegmentLabel::Const1, over_arc: 0, under_arc: 0 };
    for p in 0..4 * n {
        if seg_of[p] != usize::MAX {
            continue;
        }
        let q = resolve(p);
        if q == port_id(Port::Top) {
            ends[0] = he(p);
            continue;
        }
        if q == port_id(Port::Bottom) {
            ends[1] = he(p);
            continue;
        }
        seg_of[p] = segments.len();
        seg_of[q] = segments.len();
        segments.push(blank([he(p), he(q)], false));
    }
    let cut = segments.len();
    seg_of[4 * ends[0].crossing + ends[0].slot] = cut;
    seg_of[4 * ends[1].crossing + ends[1].slot] = cut;
    segments.push(blank(ends, true));
    for (c, x) in crossings.iter_mut().enumerate() {
        for h in 0..4 {
            x.segments[h] = seg_of[4 * c + h];
        }
    }

    let mut d = OpenDiagram {
        input: tw.to_vec(),
        twists: tw.to_vec(),
        fraction: (0, 0),
        mirror: false,
        crossings,
        segments,
        regions: Vec::new(),
        cut_segment: cut,
        endpoints: ends,
        walk: Vec::new(),
        walk_segments: Vec::new(),
        arcs: Arcs { over_at: vec![0; n], under_at: vec![0; n], n_over: 0, n_under: 0 },
        n_vars: 0,
        corners: Vec::new(),
    };
    trace_faces(&mut d);
    walk(&mut d, tw)?;
    assign_arcs(&mut d);
    Ok(d)
}

impl OpenDiagram {
    pub fn n_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn segment_at(&self, c: usize, h: usize) -> usize {
        self.crossings[c].segments[h]
    }

    pub fn region_at(&self, c: usize, j: usize) -> usize {
        self.crossings[c].regions[j % 4]
    }

    pub fn is_over(&self, c: usize, h: usize) -> bool {
        self.crossings[c].is_over(h)
    }

    pub fn other_end(&self, p: HalfEdge) -> HalfEdge {
        let s = &self.segments[self.segment_at(p.crossing, p.slot)];
        if s.ends[0] == p {
            s.ends[1]
        } else {
            s.ends[0]
        }
    }

    /// Faces on either side of a segment.
    pub fn segment_regions(&self, sid: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(2);
        for p in self.segments[sid].ends {
            for j in [p.slot, (p.slot + 3) % 4] {
                let r = self.region_at(p.crossing, j);
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
        out
    }

    /// Faces of the cut segment.
    pub fn cut_regions(&self) -> (usize, usize) {
        let r = self.segment_regions(self.cut_segment);
        (r[0], r[1])
    }

    pub fn corner_index(&self, c: usize, j: usize) -> usize {
        4 * c + j
    }

    pub fn essential_corners(&self) -> impl Iterator<Item = (usize, &Corner)> {
        self.corners.iter().enumerate().filter(|(_, c)| c.essential)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("diagram serializes")
    }

    pub fn slot_name(h: usize) -> &'static str {
        SLOT_NAMES[h]
    }
}

fn trace_faces(d: &mut OpenDiagram) {
    let n = d.n_crossings();
    let mut seen = vec![false; 4 * n];
    let mut regions = Vec::new();
    let mut region_of = vec![0; 4 * n];
    for start in 0..4 * n {
        if seen[start] {
            continue;
        }
        let mut corners = Vec::new();
        let mut cur = HalfEdge::new(start / 4, start % 4);
        while !seen[4 * cur.crossing + cur.slot] {
            seen[4 * cur.crossing + cur.slot] = true;
            let q = d.other_end(cur);
            let j = (q.slot + 3) % 4;
            corners.push((q.crossing, j));
            region_of[4 * q.crossing + j] = regions.len();
            cur = HalfEdge::new(q.crossing, j);
        }
        regions.push(Region { corners, unbounded: false });
    }
    for (c, x) in d.crossings.iter_mut().enumerate() {
        for j in 0..4 {
            x.regions[j] = region_of[4 * c + j];
        }
    }
    d.regions = regions;
    let (r1, r2) = d.cut_regions();
    d.regions[r1].unbounded = true;
    d.regions[r2].unbounded = true;
}

fn walk_from(d: &OpenDiagram, start: HalfEdge, stop: HalfEdge) -> (Vec<Visit>, Vec<usize>) {
    let mut visits = Vec::new();
    let mut segs = Vec::new();
    let mut p = start;
    loop {
        let out = HalfEdge::new(p.crossing, strand_partner(p.slot));
        visits.push(Visit {
            crossing: p.crossing,
            slot_in: p.slot,
            slot_out: out.slot,
            over: d.is_over(p.crossing, p.slot),
        });
        if out == stop || visits.len() > 2 * d.n_crossings() {
            break;
        }
        segs.push(d.segment_at(out.crossing, out.slot));
        p = d.other_end(out);
    }
    (visits, segs)
}

fn walk(d: &mut OpenDiagram, tw: &[i64]) -> Result<()> {
    let [top, bottom] = d.endpoints;
    let (mut visits, mut segs) = walk_from(d, top, bottom);
    if visits.len() != 2 * d.n_crossings() {
        return Err(Error::Link(format!("{tw:?}")));
    }
    if visits[0].over {
        (visits, segs) = walk_from(d, bottom, top);
    }
    for w in visits.windows(2) {
        if w[0].over == w[1].over {
            return Err(Error::Internal(format!("diagram of {tw:?} is not alternating")));
        }
    }
    if visits[0].over || !visits.last().unwrap().over {
        return Err(Error::Internal("endpoint condition fails".into()));
    }
    d.walk = visits;
    d.walk_segments = segs;
    Ok(())
}

fn assign_arcs(d: &mut OpenDiagram) {
    let len = d.walk.len();
    let next_seg = |i: usize| if i + 1 < len { d.walk_segments[i] } else { d.cut_segment };
    let prev_seg = |i: usize| if i == 0 { d.cut_segment } else { d.walk_segments[i - 1] };
    // over-arcs break at underpasses, under-arcs at overpasses
    let assign = |break_on_over: bool| {
        let mut arc = vec![0; d.segments.len()];
        let start = (0..len).find(|&i| d.walk[i].over == break_on_over).unwrap();
        let mut a = 0;
        for t in 0..len {
            let i = (start + t) % len;
            if t > 0 && d.walk[i].over == break_on_over {
                a += 1;
            }
            arc[next_seg(i)] = a;
        }
        (arc, a + 1)
    };
    let (over, n_over) = assign(false);
    let (under, n_under) = assign(true);
    let n = d.n_crossings();
    let mut over_at = vec![0; n];
    let mut under_at = vec![0; n];
    for (i, v) in d.walk.iter().enumerate() {
        if v.over {
            over_at[v.crossing] = over[prev_seg(i)];
        } else {
            under_at[v.crossing] = under[prev_seg(i)];
        }
    }
    for (sid, s) in d.segments.iter_mut().enumerate() {
        s.over_arc = over[sid];
        s.under_arc = under[sid];
    }
    d.arcs = Arcs { over_at, under_at, n_over, n_under };
}

/// Assign constants and variables to segments.
pub fn label_segments(d: &mut OpenDiagram) -> Result<()> {
    let (r1, r2) = d.cut_regions();
    let mut label: Vec<Option<SegmentLabel>> = vec![None; d.segments.len()];
    label[d.cut_segment] = Some(SegmentLabel::Const1);
    for sid in 0..d.segments.len() {
        let rs = d.segment_regions(sid);
        if rs.contains(&r1) || rs.contains(&r2) {
            label[sid] = Some(SegmentLabel::Const1);
        }
    }
    let segs = d.walk_segments.clone();
    let mut i = 0;
    loop {
        let sid = segs[i];
        if label[sid].is_some() {
            return Err(Error::Internal(format!("segment {sid} labeled twice")));
        }
        label[sid] = Some(SegmentLabel::ConstInf);
        i += 1;
        if d.walk[i].over {
            break;
        }
    }
    let mut i = segs.len() - 1;
    loop {
        let sid = segs[i];
        if label[sid].is_some_and(|l| l != SegmentLabel::Const0) {
            return Err(Error::Internal(format!("segment {sid} labeled twice")));
        }
        label[sid] = Some(SegmentLabel::Const0);
        if !d.walk[i].over {
            break;
        }
        i -= 1;
    }
    // variables, numbered from the bottom of the diagram upward
    let mut free: Vec<usize> = segs.iter().copied().filter(|&s| label[s].is_none()).collect();
    free.sort_by_key(|&s| {
        let e = d.segments[s].ends;
        (std::cmp::Reverse(e[0].crossing.max(e[1].crossing)), s)
    });
    for (k, &s) in free.iter().enumerate() {
        label[s] = Some(SegmentLabel::Var(k + 1));
    }
    d.n_vars = free.len();
    for (s, l) in d.segments.iter_mut().zip(label) {
        s.label = l.expect("every segment lies on the strand or the cut");
    }
    Ok(())
}

fn essential_corners_all(d: &OpenDiagram) -> Vec<Corner> {
    let mut out = Vec::with_capacity(4 * d.n_crossings());
    for c in 0..d.n_crossings() {
        for j in 0..4 {
            let (a, b) = (j, (j + 1) % 4);
            let la = d.segments[d.segment_at(c, a)].label;
            let lb = d.segments[d.segment_at(c, b)].label;
            let essential = !(la.is_degenerate()
                || lb.is_degenerate()
                || (la == SegmentLabel::Const1 && lb == SegmentLabel::Const1));
            let mut shape_exponents = vec![0; d.n_vars];
            if let SegmentLabel::Var(k) = la {
                shape_exponents[k - 1] += 1;
            }
            if let SegmentLabel::Var(k) = lb {
                shape_exponents[k - 1] -= 1;
            }
            out.push(Corner {
                crossing: c,
                position: Position::from_index(j),
                slots: (a, b),
                labels: (la, lb),
                essential,
                first_over: d.is_over(c, a),
                shape_exponents,
            });
        }
    }
    out
}

/// Essential corners of a labeled diagram, each with its shape monomial.
pub fn essential_corners(d: &OpenDiagram) -> Vec<Corner> {
    d.corners.iter().filter(|c| c.essential).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagram(tw: &[i64]) -> OpenDiagram {
        build_two_bridge(&TwistVector::new(tw.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn six_one_counts() {
        let d = diagram(&[4, 2]);
        assert_eq!(d.n_crossings(), 6);
        assert_eq!(d.n_vars, 3);
        assert_eq!(essential_corners(&d).len(), 8);
        assert_eq!(d.regions.len(), 8);
    }

    #[test]
    fn figure_eight_labels() {
        // hand labeling: one variable between the two inner crossings
        let d = diagram(&[2, 2]);
        assert_eq!(d.n_crossings(), 4);
        assert_eq!(d.n_vars, 1);
        let labels: Vec<_> = d.walk_segments.iter().map(|&s| d.segments[s].label).collect();
        assert_eq!(labels[0], SegmentLabel::ConstInf);
        assert_eq!(*labels.last().unwrap(), SegmentLabel::Const0);
        assert_eq!(labels.iter().filter(|l| matches!(l, SegmentLabel::Var(_))).count(), 1);
        assert_eq!(essential_corners(&d).len(), 2);
    }

    #[test]
    fn rejects_bad_vectors() {
        assert!(matches!(TwistVector::new(vec![5]), Err(Error::NotHyperbolic(_))));
        assert!(matches!(TwistVector::new(vec![2, 0]), Err(Error::InvalidTwist(_))));
        let torus = TwistVector::new(vec![1, 2]).unwrap();
        assert!(matches!(build_two_bridge(&torus), Err(Error::NotHyperbolic(_))));
        let link = TwistVector::new(vec![2, 2, 2]).unwrap();
        assert!(matches!(build_two_bridge(&link), Err(Error::Link(_))));
    }

    #[test]
    fn fractions() {
        assert_eq!(TwistVector::new(vec![2, 2]).unwrap().fraction(), (5, 2));
        assert_eq!(TwistVector::new(vec![4, 2]).unwrap().fraction(), (9, 2));
        let (tv, mirror) = TwistVector::from_fraction(9, 2).unwrap();
        assert_eq!(tv.entries(), &[4, 2]);
        assert!(!mirror);
        let (tv, mirror) = TwistVector::from_fraction(-7, 3).unwrap();
        assert_eq!(tv.entries(), &[2, 3]);
        assert!(mirror);
        let (tv, _) = TwistVector::from_fraction(13, 5).unwrap();
        assert_eq!(tv.fraction(), (13, 5));
        assert_eq!(tv.entries().len() % 2, 0);
    }

    #[test]
    fn mixed_signs_reexpand() {
        let tv = TwistVector::new(vec![4, -2]).unwrap();
        assert_eq!(tv.fraction(), (7, 2));
        let (pos, mirror) = tv.normalized().unwrap();
        assert!(!mirror);
        assert!(pos.entries().iter().all(|&a| a > 0));
        assert_eq!(pos.fraction().0, 7);
    }

    #[test]
    fn arcs_and_regions() {
        let d = diagram(&[3, 1, 2]);
        let n = d.n_crossings();
        assert_eq!(d.arcs.n_over, n);
        assert_eq!(d.arcs.n_under, n);
        assert_eq!(d.regions.len(), n + 2);
        assert_eq!(d.walk.len(), 2 * n);
        let json = d.to_json();
        assert!(json.contains("\"walk\""));
    }
}
