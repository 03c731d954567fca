//! Tracing Dehn–Thurston data on the theta decomposition.
//!
//! Each pair of pants is cut along its three seams into hexagons `H+` and
//! `H-`. The arcs of a multicurve in a pair of pants are normal arcs: corner
//! arcs joining two boundary curves lie in `H+`, and self-arcs from `c_i` to
//! itself cross the seam opposite `c_i` once. The second pants is a mirror
//! copy of the first, glued to it by the identity on labels, and the twist
//! `t_i` rotates the gluing on `c_i` by `t_i` points.
//!
//! Points on `c_i` are numbered along the boundary orientation of `H+`:
//! first the points of `c_i ∩ H+` (corner arcs towards the previous curve,
//! then self-arcs, then corner arcs towards the next curve), then the
//! self-arc returns in `H-`.
//!
//! The complement is assembled from the disks the chords cut out of each
//! hexagon. Disks glue across seam intervals into regions of a pants, and
//! regions glue across the intervals of each `c_i` into the complementary
//! pieces.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use super::{Component, ComponentDecomposition, TypeKey};
use crate::coords::{validate_dt, DTCoord};
use crate::error::{Error, Result};
use crate::surface::{ModelKind, SurfaceModel};

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    /// Dense relabeling of the roots in order of first appearance.
    fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut id = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if id[r] == usize::MAX {
                id[r] = count;
                count += 1;
            }
            out[x] = id[r];
        }
        (out, count)
    }
}

fn inconsistency(msg: impl Into<String>) -> Error {
    Error::TracingInconsistency(msg.into())
}

/// A point where the multicurve meets a hexagon side: `C(curve, index)` on a
/// pants curve, or `Seam(seam, index)` with seams indexed along their
/// direction from `c_s` to `c_{s+1}`.
#[derive(Debug, Clone, Copy)]
enum Pt {
    C(usize, usize),
    Seam(usize, usize),
}

/// Side ids: `0..3` are the pants curves, `3 + s` the seam from `c_s` to `c_{s+1}`.
const PLUS_SIDES: [usize; 6] = [0, 3, 1, 4, 2, 5];
const MINUS_SIDES: [usize; 6] = [0, 5, 2, 4, 1, 3];

struct Hexagon {
    /// Points in counterclockwise order.
    points: Vec<Pt>,
    partner: Vec<usize>,
    /// Disk containing the boundary segment from point `k` to point `k + 1`.
    segment_disk: Vec<usize>,
    n_disks: usize,
    /// Disks along each side, counterclockwise, one per interval between points.
    side_intervals: [Vec<usize>; 6],
}

impl Hexagon {
    fn build(points: Vec<Pt>, sides: &[usize; 6], side_points: &[Vec<usize>; 6], chords: &[(usize, usize)]) -> Hexagon {
        let n = points.len();
        let mut partner = vec![usize::MAX; n];
        for &(x, y) in chords {
            partner[x] = y;
            partner[y] = x;
        }
        let mut segment_disk = vec![usize::MAX; n.max(1)];
        let mut n_disks = 0;
        if n == 0 {
            segment_disk[0] = 0;
            n_disks = 1;
        } else {
            for start in 0..n {
                if segment_disk[start] != usize::MAX {
                    continue;
                }
                let mut seg = start;
                loop {
                    segment_disk[seg] = n_disks;
                    seg = partner[(seg + 1) % n];
                    if seg == start {
                        break;
                    }
                }
                n_disks += 1;
            }
        }
        let mut side_intervals: [Vec<usize>; 6] = Default::default();
        let mut last = n.saturating_sub(1);
        for &side in sides {
            let mut ivs = vec![segment_disk[last]];
            for &pos in &side_points[side] {
                ivs.push(segment_disk[pos]);
                last = pos;
            }
            side_intervals[side] = ivs;
        }
        Hexagon { points, partner, segment_disk, n_disks, side_intervals }
    }

    fn disk_after(&self, pos: usize) -> usize {
        self.segment_disk[pos]
    }

    fn disk_before(&self, pos: usize) -> usize {
        let n = self.points.len();
        self.segment_disk[(pos + n - 1) % n]
    }
}

/// Arc system and complement cells of one pair of pants with boundary weights `m`.
struct PantsDiagram {
    m: [usize; 3],
    hex: [Hexagon; 2],
    /// `(hexagon, position)` of each point on each pants curve.
    cpos: [Vec<(usize, usize)>; 3],
    /// Positions of each seam point in `H+` and `H-`.
    spos: [Vec<(usize, usize)>; 3],
    /// Normal arcs as pairs of `(curve, index)` endpoints.
    arcs: Vec<((usize, usize), (usize, usize))>,
    region_of_disk: [Vec<usize>; 2],
    region_chi: Vec<i64>,
    /// Region containing the interval of `c_i` after point `x`; one entry for the whole circle when `m_i = 0`.
    c_interval_region: [Vec<usize>; 3],
}

impl PantsDiagram {
    fn new(m: [usize; 3]) -> PantsDiagram {
        let mut corner = [[0usize; 3]; 3];
        let mut selfs = [0usize; 3];
        match (0..3).find(|&i| m[i] > m[(i + 1) % 3] + m[(i + 2) % 3]) {
            Some(i) => {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                selfs[i] = (m[i] - m[j] - m[k]) / 2;
                corner[i][j] = m[j];
                corner[j][i] = m[j];
                corner[i][k] = m[k];
                corner[k][i] = m[k];
            }
            None => {
                for i in 0..3 {
                    let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                    let a = (m[i] + m[j] - m[k]) / 2;
                    corner[i][j] = a;
                    corner[j][i] = a;
                }
            }
        }
        let prev = |i: usize| (i + 2) % 3;
        let plus_len: [usize; 3] = std::array::from_fn(|i| corner[prev(i)][i] + selfs[i] + corner[i][(i + 1) % 3]);
        // The seam from c_s to c_{s+1} is crossed by the self-arcs of c_{s+2}.
        let seam_len: [usize; 3] = std::array::from_fn(|s| selfs[(s + 2) % 3]);

        let mut cpos: [Vec<(usize, usize)>; 3] = std::array::from_fn(|i| vec![(0, 0); m[i]]);
        let mut spos: [Vec<(usize, usize)>; 3] = std::array::from_fn(|s| vec![(0, 0); seam_len[s]]);

        let mut layout = |h: usize, sides: &[usize; 6]| {
            let mut points = Vec::new();
            let mut side_points: [Vec<usize>; 6] = Default::default();
            for &side in sides {
                let idxs: Vec<Pt> = if side < 3 {
                    let range = if h == 0 { 0..plus_len[side] } else { plus_len[side]..m[side] };
                    range.map(|x| Pt::C(side, x)).collect()
                } else {
                    let s = side - 3;
                    if h == 0 {
                        (0..seam_len[s]).map(|r| Pt::Seam(s, r)).collect()
                    } else {
                        (0..seam_len[s]).rev().map(|r| Pt::Seam(s, r)).collect()
                    }
                };
                for pt in idxs {
                    let pos = points.len();
                    match pt {
                        Pt::C(i, x) => cpos[i][x] = (h, pos),
                        Pt::Seam(s, r) if h == 0 => spos[s][r].0 = pos,
                        Pt::Seam(s, r) => spos[s][r].1 = pos,
                    }
                    side_points[side].push(pos);
                    points.push(pt);
                }
            }
            (points, side_points)
        };
        let (plus_points, plus_sides) = layout(0, &PLUS_SIDES);
        let (minus_points, minus_sides) = layout(1, &MINUS_SIDES);

        let mut arcs = Vec::new();
        let mut plus_chords = Vec::new();
        let mut minus_chords = Vec::new();
        for i in 0..3 {
            let k = prev(i);
            for r in 0..corner[k][i] {
                let (a, b) = ((k, plus_len[k] - 1 - r), (i, r));
                arcs.push((a, b));
                plus_chords.push((cpos[a.0][a.1].1, cpos[b.0][b.1].1));
            }
            let seam = (i + 1) % 3;
            let off = corner[k][i];
            for r in 0..selfs[i] {
                let back = selfs[i] - 1 - r;
                arcs.push(((i, off + r), (i, plus_len[i] + back)));
                plus_chords.push((cpos[i][off + r].1, spos[seam][back].0));
            }
            for r in 0..selfs[i] {
                minus_chords.push((spos[seam][r].1, cpos[i][plus_len[i] + r].1));
            }
        }
        let hex = [
            Hexagon::build(plus_points, &PLUS_SIDES, &plus_sides, &plus_chords),
            Hexagon::build(minus_points, &MINUS_SIDES, &minus_sides, &minus_chords),
        ];

        let n_plus = hex[0].n_disks;
        let mut dsu = Dsu::new(n_plus + hex[1].n_disks);
        let mut seam_glues = Vec::new();
        for s in 0..3 {
            let n = seam_len[s];
            for r in 0..=n {
                let a = hex[0].side_intervals[3 + s][r];
                let b = n_plus + hex[1].side_intervals[3 + s][n - r];
                dsu.union(a, b);
                seam_glues.push(a);
            }
        }
        let (labels, n_regions) = dsu.labels();
        let mut region_chi = vec![0i64; n_regions];
        for &l in &labels {
            region_chi[l] += 1;
        }
        for a in seam_glues {
            region_chi[labels[a]] -= 1;
        }
        let region_of_disk = [labels[..n_plus].to_vec(), labels[n_plus..].to_vec()];

        let c_interval_region = std::array::from_fn(|i| {
            if m[i] == 0 {
                return vec![region_of_disk[0][hex[0].side_intervals[i][0]]];
            }
            (0..m[i])
                .map(|x| {
                    if x < plus_len[i] {
                        region_of_disk[0][hex[0].side_intervals[i][x + 1]]
                    } else {
                        region_of_disk[1][hex[1].side_intervals[i][x - plus_len[i] + 1]]
                    }
                })
                .collect()
        });

        PantsDiagram { m, hex, cpos, spos, arcs, region_of_disk, region_chi, c_interval_region }
    }

    fn n_regions(&self) -> usize {
        self.region_chi.len()
    }
}

thread_local! {
    static DIAGRAMS: RefCell<HashMap<[usize; 3], Rc<PantsDiagram>>> = RefCell::new(HashMap::new());
}

fn diagram(m: [usize; 3]) -> Rc<PantsDiagram> {
    DIAGRAMS.with(|cache| {
        let mut cache = cache.borrow_mut();
        if cache.len() > 1 << 14 {
            cache.clear();
        }
        cache.entry(m).or_insert_with(|| Rc::new(PantsDiagram::new(m))).clone()
    })
}

/// Components and type of a genus-2 multicurve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtTrace {
    pub decomposition: ComponentDecomposition,
    pub key: TypeKey,
}

pub fn trace_components_dt(model: &SurfaceModel, coord: &DTCoord) -> Result<ComponentDecomposition> {
    if model.kind != ModelKind::GenusTwo {
        return Err(Error::NormModelMismatch("Dehn-Thurston tracing needs the genus-2 model".into()));
    }
    Ok(trace_dt(coord)?.decomposition)
}

struct Class {
    coord: DTCoord,
    weight: u64,
    /// Complementary pieces on the two sides.
    sides: Vec<usize>,
}

pub fn trace_dt(coord: &DTCoord) -> Result<DtTrace> {
    let coord = validate_dt(coord.m(), coord.t())?;
    let m = coord.m().map(|x| x as usize);
    let t = coord.t();
    let d = diagram(m);
    debug_assert_eq!(d.m, m);

    let shift = |i: usize, x: usize| (x as i64 + t[i]).rem_euclid(m[i] as i64) as usize;

    // Strands: union of arc endpoints in both pants, glued across the curves.
    let total: usize = m.iter().sum();
    let off = [0, m[0], m[0] + m[1]];
    let cp = |p: usize, i: usize, x: usize| p * total + off[i] + x;
    let mut strands = Dsu::new(2 * total);
    for p in 0..2 {
        for &((i, x), (j, y)) in &d.arcs {
            strands.union(cp(p, i, x), cp(p, j, y));
        }
    }
    for i in 0..3 {
        for x in 0..m[i] {
            strands.union(cp(0, i, x), cp(1, i, shift(i, x)));
        }
    }
    let (strand_of, n_strands) = strands.labels();

    let mut comp_m = vec![[0i64; 3]; n_strands];
    let mut comp_t = vec![[0i64; 3]; n_strands];
    for i in 0..3 {
        for x in 0..m[i] {
            comp_m[strand_of[cp(0, i, x)]][i] += 1;
        }
        // Each strand's twist counts how often it passes the start of the
        // labels while crossing the gluing annulus; these sum to t_i.
        for x in 0..m[i] {
            comp_t[strand_of[cp(0, i, x)]][i] += (x as i64 + t[i]).div_euclid(m[i] as i64);
        }
    }

    // Complementary pieces: pants regions glued across the intervals of each curve.
    let nr = d.n_regions();
    let region = |p: usize, r: usize| p * nr + r;
    let mut pieces = Dsu::new(2 * nr);
    let mut interval_glues = Vec::new();
    for i in 0..3 {
        if m[i] > 0 {
            for x in 0..m[i] {
                let a = region(0, d.c_interval_region[i][x]);
                pieces.union(a, region(1, d.c_interval_region[i][shift(i, x)]));
                interval_glues.push(a);
            }
        } else if t[i] == 0 {
            pieces.union(region(0, d.c_interval_region[i][0]), region(1, d.c_interval_region[i][0]));
        }
    }
    let (piece_of, n_pieces) = pieces.labels();
    let mut piece_chi = vec![0i64; n_pieces];
    for p in 0..2 {
        for r in 0..nr {
            piece_chi[piece_of[region(p, r)]] += d.region_chi[r];
        }
    }
    for a in interval_glues {
        piece_chi[piece_of[a]] -= 1;
    }
    if piece_chi.iter().sum::<i64>() != -2 {
        return Err(inconsistency(format!("complement Euler characteristics {piece_chi:?} do not sum to -2")));
    }

    // Sides of strands: a node is one side of a chord end, before or after its point.
    let hex_len = [d.hex[0].points.len(), d.hex[1].points.len()];
    let base = |p: usize, h: usize| 2 * (p * (hex_len[0] + hex_len[1]) + if h == 1 { hex_len[0] } else { 0 });
    let node = |p: usize, h: usize, pos: usize, after: bool| base(p, h) + 2 * pos + after as usize;
    let n_nodes = 4 * (hex_len[0] + hex_len[1]);
    let mut sides = Dsu::new(n_nodes);
    for p in 0..2 {
        for h in 0..2 {
            for (x, &y) in d.hex[h].partner.iter().enumerate() {
                if x < y {
                    sides.union(node(p, h, x, true), node(p, h, y, false));
                    sides.union(node(p, h, x, false), node(p, h, y, true));
                }
            }
        }
        for s in 0..3 {
            for &(a, b) in &d.spos[s] {
                sides.union(node(p, 0, a, true), node(p, 1, b, false));
                sides.union(node(p, 0, a, false), node(p, 1, b, true));
            }
        }
    }
    for i in 0..3 {
        for x in 0..m[i] {
            let (h1, a) = d.cpos[i][x];
            let (h2, b) = d.cpos[i][shift(i, x)];
            sides.union(node(0, h1, a, true), node(1, h2, b, true));
            sides.union(node(0, h1, a, false), node(1, h2, b, false));
        }
    }
    let (side_of, n_sides) = sides.labels();

    let mut side_piece = vec![usize::MAX; n_sides];
    for p in 0..2 {
        for h in 0..2 {
            let hex = &d.hex[h];
            for pos in 0..hex_len[h] {
                for after in [false, true] {
                    let disk = if after { hex.disk_after(pos) } else { hex.disk_before(pos) };
                    let piece = piece_of[region(p, d.region_of_disk[h][disk])];
                    let s = side_of[node(p, h, pos, after)];
                    if side_piece[s] == usize::MAX {
                        side_piece[s] = piece;
                    } else if side_piece[s] != piece {
                        return Err(inconsistency("a strand side touches two complementary pieces"));
                    }
                }
            }
        }
    }
    let mut side_strand = vec![usize::MAX; n_sides];
    for p in 0..2 {
        for i in 0..3 {
            for x in 0..m[i] {
                let (h, pos) = d.cpos[i][x];
                let strand = strand_of[cp(p, i, x)];
                for after in [false, true] {
                    let s = side_of[node(p, h, pos, after)];
                    if side_strand[s] == usize::MAX {
                        side_strand[s] = strand;
                    } else if side_strand[s] != strand {
                        return Err(inconsistency("a side class spans two strands"));
                    }
                }
            }
        }
    }

    let mut classes: Vec<Class> = (0..n_strands)
        .map(|k| Class { coord: DTCoord::from_parts_unchecked(comp_m[k], comp_t[k]), weight: 1, sides: Vec::new() })
        .collect();
    for s in 0..n_sides {
        if side_strand[s] == usize::MAX {
            return Err(inconsistency("side class without a strand"));
        }
        classes[side_strand[s]].sides.push(side_piece[s]);
    }
    if let Some(c) = classes.iter().find(|c| c.sides.len() != 2) {
        return Err(inconsistency(format!("strand {} has {} sides", c.coord, c.sides.len())));
    }
    for i in 0..3 {
        if m[i] == 0 && t[i] > 0 {
            let r = d.c_interval_region[i][0];
            classes.push(Class {
                coord: DTCoord::pants_curve(i, 1),
                weight: t[i] as u64,
                sides: vec![piece_of[region(0, r)], piece_of[region(1, r)]],
            });
        }
    }

    // Annuli between parallel copies merge their classes.
    let mut incidences: Vec<Vec<usize>> = vec![Vec::new(); n_pieces];
    for (k, c) in classes.iter().enumerate() {
        for &s in &c.sides {
            incidences[s].push(k);
        }
    }
    let mut parallel = Dsu::new(classes.len());
    for (piece, inc) in incidences.iter().enumerate() {
        match piece_chi[piece] {
            chi if chi > 0 => return Err(inconsistency("complement has a disk piece")),
            0 => {
                if inc.len() != 2 || inc[0] == inc[1] {
                    return Err(inconsistency(format!("annular piece with incidences {inc:?}")));
                }
                parallel.union(inc[0], inc[1]);
            }
            _ => {}
        }
    }
    let (class_of, n_classes) = parallel.labels();
    let mut merged: Vec<Option<Class>> = (0..n_classes).map(|_| None).collect();
    for (k, c) in classes.into_iter().enumerate() {
        let outer: Vec<usize> = c.sides.iter().copied().filter(|&s| piece_chi[s] != 0).collect();
        match &mut merged[class_of[k]] {
            slot @ None => *slot = Some(Class { sides: outer, ..c }),
            Some(acc) => {
                if acc.coord != c.coord {
                    return Err(inconsistency(format!("parallel strands {} and {} differ", acc.coord, c.coord)));
                }
                acc.weight += c.weight;
                acc.sides.extend(outer);
            }
        }
    }
    let merged: Vec<Class> = merged.into_iter().flatten().collect();

    let mut vertex_of = vec![usize::MAX; n_pieces];
    let mut vertices: Vec<(u32, u32)> = Vec::new();
    let mut vertex_chi: Vec<i64> = Vec::new();
    let mut edges = Vec::new();
    for c in &merged {
        if c.sides.len() != 2 {
            return Err(inconsistency(format!("class {} has {} outer sides", c.coord, c.sides.len())));
        }
        let mut ends = [0; 2];
        for (e, &s) in ends.iter_mut().zip(&c.sides) {
            if vertex_of[s] == usize::MAX {
                vertex_of[s] = vertices.len();
                vertices.push((0, 0));
                vertex_chi.push(piece_chi[s]);
            }
            *e = vertex_of[s];
            vertices[*e].1 += 1;
        }
        edges.push((ends[0], ends[1], c.weight));
    }
    if vertex_chi.iter().sum::<i64>() != -2 {
        return Err(inconsistency("pieces meeting the multicurve do not cover the surface"));
    }
    for (v, &chi) in vertices.iter_mut().zip(&vertex_chi) {
        let twice_genus = 2 - v.1 as i64 - chi;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(inconsistency(format!("piece with chi {chi} and {} boundaries", v.1)));
        }
        v.0 = (twice_genus / 2) as u32;
    }

    let mut components: Vec<(Component, u64)> = merged.iter().map(|c| (Component::Dt(c.coord), c.weight)).collect();
    components.sort();
    let decomposition = ComponentDecomposition { components };
    if decomposition.reassemble() != Some(crate::coords::Coord::Dt(coord)) {
        return Err(inconsistency(format!("components of {coord} do not reassemble")));
    }
    Ok(DtTrace { decomposition, key: TypeKey::from_graph(&vertices, &edges) })
}
