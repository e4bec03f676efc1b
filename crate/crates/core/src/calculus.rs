//! Plumbing calculus: blow-downs, zero-pair cancellation, and a breadth-first
//! reducer that certifies a diagram bounds S³ by reaching the empty graph.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::graph::{PlumbingGraph, VertexId};
use crate::io::MoveSpec;
use crate::lattice::{determinant, linking_matrix, LinkingMatrix};

/// A single calculus move, with enough recorded data to re-check it on replay.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    /// Remove a ±1 vertex of valence 1 or 2; neighbors shift by `-sign` and,
    /// at valence 2, become adjacent.
    BlowDown {
        vertex: VertexId,
        sign: i64,
        neighbors: Vec<VertexId>,
    },
    /// Remove an isolated ±1 vertex.
    DeleteUnitVertex { vertex: VertexId, sign: i64 },
    /// Remove a two-vertex component one of whose vertices has weight 0.
    CancelZeroPair {
        zero: VertexId,
        partner: VertexId,
        partner_weight: i64,
    },
    /// Inverse of a valence-1 blow-down: hang a new `sign` vertex on `anchor`.
    BlowUpLeaf {
        anchor: VertexId,
        new: VertexId,
        sign: i64,
    },
    /// Inverse of a valence-2 blow-down: subdivide the edge `left`—`right`.
    BlowUpEdge {
        left: VertexId,
        right: VertexId,
        new: VertexId,
        sign: i64,
    },
}

impl Move {
    /// Search priority: kind first; blow-downs of leaves before valence-2 ones.
    fn rank(&self) -> u8 {
        match self {
            Move::CancelZeroPair { .. } => 0,
            Move::DeleteUnitVertex { .. } => 1,
            Move::BlowDown { neighbors, .. } if neighbors.len() < 2 => 2,
            Move::BlowDown { .. } => 3,
            Move::BlowUpLeaf { .. } => 4,
            Move::BlowUpEdge { .. } => 5,
        }
    }

    pub fn is_blow_up(&self) -> bool {
        matches!(self, Move::BlowUpLeaf { .. } | Move::BlowUpEdge { .. })
    }

    pub fn spec(&self) -> MoveSpec {
        match self {
            Move::BlowDown { vertex, .. } => MoveSpec::BlowDown(vertex.clone()),
            Move::DeleteUnitVertex { vertex, .. } => MoveSpec::Delete(vertex.clone()),
            Move::CancelZeroPair { zero, partner, .. } => {
                MoveSpec::Cancel(zero.clone(), partner.clone())
            }
            Move::BlowUpLeaf { anchor, new, sign } => {
                MoveSpec::BlowUpLeaf(anchor.clone(), new.clone(), *sign)
            }
            Move::BlowUpEdge {
                left,
                right,
                new,
                sign,
            } => MoveSpec::BlowUpEdge(left.clone(), right.clone(), new.clone(), *sign),
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::io::write_move(self))
    }
}

fn unit_sign(g: &PlumbingGraph, v: &VertexId) -> Result<i64> {
    match g.weight(v) {
        None => Err(Error::Move(format!("no vertex `{v}`"))),
        Some(w @ (1 | -1)) => Ok(w),
        Some(w) => Err(Error::Move(format!("vertex `{v}` has weight {w}, not ±1"))),
    }
}

fn shift(g: &mut PlumbingGraph, v: &VertexId, by: i64) -> Result<()> {
    let w = g
        .weight(v)
        .ok_or_else(|| Error::Move(format!("no vertex `{v}`")))?;
    let nw = w
        .checked_add(by)
        .ok_or_else(|| Error::Move(format!("weight of `{v}` overflows")))?;
    g.set_weight(v, nw)
}

/// Blows down the ±1 vertex `v` (valence at most 2).
pub fn blow_down(g: &PlumbingGraph, v: &VertexId) -> Result<PlumbingGraph> {
    blow_down_recorded(g, v).map(|(h, _)| h)
}

fn blow_down_recorded(g: &PlumbingGraph, v: &VertexId) -> Result<(PlumbingGraph, Move)> {
    let sign = unit_sign(g, v)?;
    let neighbors: Vec<VertexId> = g.neighbors(v).cloned().collect();
    if neighbors.len() > 2 {
        return Err(Error::Move(format!(
            "vertex `{v}` has valence {} > 2",
            neighbors.len()
        )));
    }
    if let [a, b] = neighbors.as_slice() {
        // In a forest the two neighbors of v are never adjacent; checked anyway
        // because a replayed trace may start from any graph.
        if g.adjacent(a, b) {
            return Err(Error::Move(format!(
                "neighbors `{a}` and `{b}` of `{v}` are already adjacent"
            )));
        }
    }
    let mut h = g.clone();
    h.remove_vertex(v);
    for n in &neighbors {
        shift(&mut h, n, -sign)?;
    }
    if let [a, b] = neighbors.as_slice() {
        h.add_edge(a, b).map_err(|e| Error::Move(e.to_string()))?;
    }
    let mv = if neighbors.is_empty() {
        Move::DeleteUnitVertex {
            vertex: v.clone(),
            sign,
        }
    } else {
        Move::BlowDown {
            vertex: v.clone(),
            sign,
            neighbors,
        }
    };
    Ok((h, mv))
}

/// Deletes an isolated ±1 vertex.
pub fn delete_unit_vertex(g: &PlumbingGraph, v: &VertexId) -> Result<PlumbingGraph> {
    unit_sign(g, v)?;
    if g.valence(v) != 0 {
        return Err(Error::Move(format!("vertex `{v}` is not isolated")));
    }
    let mut h = g.clone();
    h.remove_vertex(v);
    Ok(h)
}

/// Removes the component `{u, v}` when it is exactly one edge with a 0-framed end.
pub fn cancel_zero_pair(g: &PlumbingGraph, u: &VertexId, v: &VertexId) -> Result<PlumbingGraph> {
    cancel_recorded(g, u, v).map(|(h, _)| h)
}

fn cancel_recorded(g: &PlumbingGraph, u: &VertexId, v: &VertexId) -> Result<(PlumbingGraph, Move)> {
    if !g.adjacent(u, v) {
        return Err(Error::Move(format!(
            "`{u}` and `{v}` are not joined by an edge"
        )));
    }
    if g.valence(u) != 1 || g.valence(v) != 1 {
        return Err(Error::Move(format!(
            "edge `{u}`-`{v}` is not a whole component"
        )));
    }
    let (wu, wv) = (
        g.weight(u).expect("adjacent"),
        g.weight(v).expect("adjacent"),
    );
    let (zero, partner, partner_weight) = match (wu, wv) {
        (0, _) => (u, v, wv),
        (_, 0) => (v, u, wu),
        _ => {
            return Err(Error::Move(format!(
                "neither `{u}` ({wu}) nor `{v}` ({wv}) has weight 0"
            )))
        }
    };
    let mut h = g.clone();
    h.remove_vertex(u);
    h.remove_vertex(v);
    Ok((
        h,
        Move::CancelZeroPair {
            zero: zero.clone(),
            partner: partner.clone(),
            partner_weight,
        },
    ))
}

fn check_sign(sign: i64) -> Result<()> {
    if sign == 1 || sign == -1 {
        Ok(())
    } else {
        Err(Error::Move(format!("blow-up sign must be ±1, got {sign}")))
    }
}

fn check_fresh(g: &PlumbingGraph, new: &VertexId) -> Result<()> {
    if g.contains(new) {
        Err(Error::Move(format!("vertex `{new}` already exists")))
    } else {
        Ok(())
    }
}

/// Adds a new `sign` vertex hanging off `anchor`; `anchor` shifts by `sign`.
pub fn blow_up_leaf(
    g: &PlumbingGraph,
    anchor: &VertexId,
    new: &VertexId,
    sign: i64,
) -> Result<PlumbingGraph> {
    check_sign(sign)?;
    check_fresh(g, new)?;
    let mut h = g.clone();
    shift(&mut h, anchor, sign)?;
    h.add_vertex(new.clone(), sign)?;
    h.add_edge(anchor, new)?;
    Ok(h)
}

/// Subdivides the edge `left`—`right` by a new `sign` vertex; both ends shift by `sign`.
pub fn blow_up_edge(
    g: &PlumbingGraph,
    left: &VertexId,
    right: &VertexId,
    new: &VertexId,
    sign: i64,
) -> Result<PlumbingGraph> {
    check_sign(sign)?;
    check_fresh(g, new)?;
    if !g.adjacent(left, right) {
        return Err(Error::Move(format!(
            "`{left}` and `{right}` are not adjacent"
        )));
    }
    let mut h = g.clone();
    h.remove_edge(left, right);
    shift(&mut h, left, sign)?;
    shift(&mut h, right, sign)?;
    h.add_vertex(new.clone(), sign)?;
    h.add_edge(left, new)?;
    h.add_edge(new, right)?;
    Ok(h)
}

/// Applies a move spec, returning the new graph and the fully recorded move.
pub fn apply_spec(g: &PlumbingGraph, spec: &MoveSpec) -> Result<(PlumbingGraph, Move)> {
    match spec {
        MoveSpec::BlowDown(v) => {
            if g.valence(v) == 0 && g.contains(v) {
                return Err(Error::Move(format!(
                    "vertex `{v}` is isolated; use `delete`"
                )));
            }
            blow_down_recorded(g, v)
        }
        MoveSpec::Delete(v) => {
            let sign = unit_sign(g, v)?;
            Ok((
                delete_unit_vertex(g, v)?,
                Move::DeleteUnitVertex {
                    vertex: v.clone(),
                    sign,
                },
            ))
        }
        MoveSpec::Cancel(u, v) => {
            let (h, mv) = cancel_recorded(g, u, v)?;
            match &mv {
                Move::CancelZeroPair { zero, .. } if zero == u || g.weight(u) != Some(0) => {
                    Ok((h, mv))
                }
                _ => Err(Error::Move(format!(
                    "`{u}` is listed first but is not 0-framed"
                ))),
            }
        }
        MoveSpec::BlowUpLeaf(a, n, s) => Ok((
            blow_up_leaf(g, a, n, *s)?,
            Move::BlowUpLeaf {
                anchor: a.clone(),
                new: n.clone(),
                sign: *s,
            },
        )),
        MoveSpec::BlowUpEdge(l, r, n, s) => Ok((
            blow_up_edge(g, l, r, n, *s)?,
            Move::BlowUpEdge {
                left: l.clone(),
                right: r.clone(),
                new: n.clone(),
                sign: *s,
            },
        )),
    }
}

/// Applies a recorded move, checking the recorded data against `g`.
pub fn apply(g: &PlumbingGraph, mv: &Move) -> Result<PlumbingGraph> {
    let (h, recorded) = apply_spec(g, &mv.spec())?;
    if &recorded != mv {
        return Err(Error::Move(format!(
            "move `{mv}` does not match the graph it is applied to"
        )));
    }
    Ok(h)
}

fn fresh_id(g: &PlumbingGraph) -> VertexId {
    (0..)
        .map(|i| VertexId::new(format!("x{i}")))
        .find(|id| !g.contains(id))
        .expect("unbounded id supply")
}

/// Every move applicable to `g`, in the search's fixed order: by kind
/// (cancel, delete, leaf blow-down, valence-2 blow-down, leaf blow-up, edge
/// blow-up), then by vertex id.
pub fn applicable_moves(g: &PlumbingGraph, with_blow_ups: bool) -> Vec<(Move, PlumbingGraph)> {
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        if let Ok((h, mv)) = cancel_recorded(g, u, v) {
            out.push((mv, h));
        }
    }
    for (v, w) in g.vertices() {
        if w.abs() == 1 && g.valence(v) <= 2 {
            if let Ok((h, mv)) = blow_down_recorded(g, v) {
                out.push((mv, h));
            }
        }
    }
    if with_blow_ups {
        let new = fresh_id(g);
        for sign in [-1, 1] {
            for v in g.ids() {
                if let Ok(h) = blow_up_leaf(g, v, &new, sign) {
                    out.push((
                        Move::BlowUpLeaf {
                            anchor: v.clone(),
                            new: new.clone(),
                            sign,
                        },
                        h,
                    ));
                }
            }
            for (l, r) in g.edges() {
                if let Ok(h) = blow_up_edge(g, l, r, &new, sign) {
                    out.push((
                        Move::BlowUpEdge {
                            left: l.clone(),
                            right: r.clone(),
                            new: new.clone(),
                            sign,
                        },
                        h,
                    ));
                }
            }
        }
    }
    // Stable sort: within a rank the generation order above is id order.
    out.sort_by_key(|(mv, _)| mv.rank());
    out
}

/// Label-free encoding of a weighted forest.
///
/// Each tree is rooted at its center (or split at its central edge), encoded
/// bottom-up as `(w c1 c2 ...)` with sorted children; trees are sorted and
/// joined. Two forests get the same string iff they are isomorphic as
/// weighted graphs.
pub fn canonical_form(g: &PlumbingGraph) -> String {
    let mut trees: Vec<String> = g
        .components()
        .iter()
        .map(|c| canonical_tree(g, c))
        .collect();
    trees.sort();
    format!("F[{}]", trees.join(","))
}

fn canonical_tree(g: &PlumbingGraph, comp: &[VertexId]) -> String {
    let index = |v: &VertexId| comp.binary_search(v).expect("vertex in component");
    let n = comp.len();
    let adj: Vec<Vec<usize>> = comp
        .iter()
        .map(|v| g.neighbors(v).map(index).collect())
        .collect();

    // Peel leaves layer by layer; the last one or two vertices are the center.
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&i| degree[i] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &nb in &adj[leaf] {
                if degree[nb] > 1 {
                    degree[nb] -= 1;
                    if degree[nb] == 1 {
                        next.push(nb);
                    }
                }
            }
            degree[leaf] = 0;
        }
        layer = next;
    }
    let centers = layer;

    let encode = |root: usize, blocked: Option<usize>| -> String {
        // Iterative post-order so long chains do not exhaust the stack.
        let mut order = vec![root];
        let mut parent = vec![usize::MAX; n];
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            for &y in &adj[x] {
                if y != parent[x] && Some(y) != blocked {
                    parent[y] = x;
                    order.push(y);
                }
            }
            i += 1;
        }
        let mut code: Vec<Option<String>> = vec![None; n];
        let mut children: Vec<Vec<String>> = vec![Vec::new(); n];
        for &x in order.iter().rev() {
            let mut kids = std::mem::take(&mut children[x]);
            kids.sort();
            let w = g.weight(&comp[x]).expect("vertex in graph");
            let s = format!("({w}{})", kids.concat());
            if x != root {
                children[parent[x]].push(s.clone());
            }
            code[x] = Some(s);
        }
        code[root].take().expect("root encoded")
    };

    match centers.as_slice() {
        [c] => encode(*c, None),
        [a, b] => {
            let mut halves = [encode(*a, Some(*b)), encode(*b, Some(*a))];
            halves.sort();
            format!("<{}{}>", halves[0], halves[1])
        }
        _ => unreachable!("a tree has one or two centers"),
    }
}

/// Start graph, moves, and the graph the moves produce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTrace {
    pub start: PlumbingGraph,
    pub moves: Vec<Move>,
    pub end: PlumbingGraph,
}

impl MoveTrace {
    /// Replays the moves from `start`, returning every intermediate graph
    /// (start first, end last). Fails if a move does not apply or the result
    /// differs from `end`.
    pub fn replay(&self) -> Result<Vec<PlumbingGraph>> {
        let mut graphs = vec![self.start.clone()];
        for mv in &self.moves {
            let next = apply(graphs.last().expect("nonempty"), mv)?;
            next.validate()?;
            graphs.push(next);
        }
        if graphs.last() != Some(&self.end) {
            return Err(Error::Move(
                "replayed trace does not end at the recorded graph".into(),
            ));
        }
        Ok(graphs)
    }

    /// Builds a trace from unrecorded move specs by applying them in order.
    pub fn from_specs(start: PlumbingGraph, specs: &[MoveSpec]) -> Result<Self> {
        let mut g = start.clone();
        let mut moves = Vec::with_capacity(specs.len());
        for (i, spec) in specs.iter().enumerate() {
            let (h, mv) =
                apply_spec(&g, spec).map_err(|e| Error::Move(format!("move {}: {e}", i + 1)))?;
            moves.push(mv);
            g = h;
        }
        Ok(Self {
            start,
            moves,
            end: g,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionVerdict {
    /// The diagram reduces to the empty graph; its boundary is S³.
    S3 { trace: MoveTrace },
    /// `|det| != 1`: the boundary is not even a homology sphere.
    NotHomologySphere { det_abs: BigInt },
    /// No reduction found. `budget_exhausted` is false when the whole
    /// reachable state space was searched.
    Unknown { budget_exhausted: bool },
}

impl ReductionVerdict {
    pub fn is_s3(&self) -> bool {
        matches!(self, ReductionVerdict::S3 { .. })
    }

    pub fn trace(&self) -> Option<&MoveTrace> {
        match self {
            ReductionVerdict::S3 { trace } => Some(trace),
            _ => None,
        }
    }
}

impl fmt::Display for ReductionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionVerdict::S3 { .. } => f.write_str("S3"),
            ReductionVerdict::NotHomologySphere { det_abs } => write!(f, "NOT-HS({det_abs})"),
            ReductionVerdict::Unknown { .. } => f.write_str("UNKNOWN"),
        }
    }
}

pub const DEFAULT_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Maximum number of distinct states visited.
    pub budget: usize,
    /// Maximum number of blow-ups on any search path.
    pub max_blow_ups: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            max_blow_ups: 0,
        }
    }
}

/// Outcome of [`reduce_to_s3`] plus search statistics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub verdict: ReductionVerdict,
    pub visited: usize,
}

struct Node {
    graph: PlumbingGraph,
    parent: Option<(usize, Move)>,
    blow_ups: usize,
}

/// Breadth-first search for a move sequence ending in the empty graph.
///
/// States are deduplicated by `(canonical_form, blow-ups used)`; successors
/// are expanded in [`applicable_moves`] order, so the result is deterministic.
pub fn reduce_to_s3(g: &PlumbingGraph, options: ReduceOptions) -> Reduction {
    let det = determinant(&linking_matrix(g)).abs();
    if !det.is_one() {
        return Reduction {
            verdict: ReductionVerdict::NotHomologySphere { det_abs: det },
            visited: 0,
        };
    }
    let mut nodes = vec![Node {
        graph: g.clone(),
        parent: None,
        blow_ups: 0,
    }];
    let mut seen: HashSet<(String, usize)> = HashSet::from([(canonical_form(g), 0)]);
    let mut queue = VecDeque::from([0usize]);

    let finish = |nodes: &[Node], mut at: usize| -> ReductionVerdict {
        let end = nodes[at].graph.clone();
        let mut moves = Vec::new();
        while let Some((p, mv)) = &nodes[at].parent {
            moves.push(mv.clone());
            at = *p;
        }
        moves.reverse();
        ReductionVerdict::S3 {
            trace: MoveTrace {
                start: nodes[0].graph.clone(),
                moves,
                end,
            },
        }
    };

    if g.is_empty() {
        return Reduction {
            verdict: finish(&nodes, 0),
            visited: 1,
        };
    }
    while let Some(at) = queue.pop_front() {
        let used = nodes[at].blow_ups;
        let allow = used < options.max_blow_ups;
        for (mv, next) in applicable_moves(&nodes[at].graph, allow) {
            let next_used = used + usize::from(mv.is_blow_up());
            if !seen.insert((canonical_form(&next), next_used)) {
                continue;
            }
            let done = next.is_empty();
            nodes.push(Node {
                graph: next,
                parent: Some((at, mv)),
                blow_ups: next_used,
            });
            let id = nodes.len() - 1;
            if done {
                return Reduction {
                    verdict: finish(&nodes, id),
                    visited: seen.len(),
                };
            }
            if seen.len() >= options.budget {
                return Reduction {
                    verdict: ReductionVerdict::Unknown {
                        budget_exhausted: true,
                    },
                    visited: seen.len(),
                };
            }
            queue.push_back(id);
        }
    }
    Reduction {
        verdict: ReductionVerdict::Unknown {
            budget_exhausted: false,
        },
        visited: seen.len(),
    }
}

/// Candidate handle attachments: for every way of linking a new −1-framed
/// component once with at most two existing vertices, the `|det|` of the
/// enlarged linking matrix. Linking two vertices of one tree closes a cycle,
/// so this works on matrices rather than on plumbing graphs.
pub fn unit_attachments(g: &PlumbingGraph) -> Vec<(Vec<VertexId>, BigInt)> {
    let base = linking_matrix(g);
    let ids = base.ids().to_vec();
    let n = ids.len();
    let mut targets: Vec<Vec<usize>> = vec![vec![]];
    for a in 0..n {
        targets.push(vec![a]);
        for b in a + 1..n {
            targets.push(vec![a, b]);
        }
    }
    targets
        .into_iter()
        .map(|t| {
            let mut rows: Vec<Vec<i64>> = base
                .rows()
                .iter()
                .map(|r| {
                    let mut r = r.clone();
                    r.push(0);
                    r
                })
                .collect();
            let mut last = vec![0i64; n + 1];
            last[n] = -1;
            for &i in &t {
                rows[i][n] = 1;
                last[i] = 1;
            }
            rows.push(last);
            let m = LinkingMatrix::from_rows(rows).expect("symmetric by construction");
            (
                t.into_iter().map(|i| ids[i].clone()).collect(),
                determinant(&m).abs(),
            )
        })
        .collect()
}
