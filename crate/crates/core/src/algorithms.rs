//! Reference node programs for the simulator: leader election with BFS-tree
//! construction, pipelined all-source BFS (every node learns its full
//! distance vector in a linear number of rounds), and eccentricity /
//! diameter / radius aggregation over the tree.
//!
//! All three are phases of one state machine, cut off at different points:
//!
//! * rounds `1..=n+1` — **flood**: every node broadcasts its best
//!   `(leader, depth)` claim whenever it improves, with a flag bit marking
//!   the port it considers its parent. When the flood settles each node
//!   knows the minimum id, its BFS depth from it, its parent port and the
//!   ports that claimed it (its children).
//! * rounds `n+2..` — **token-staggered all-source BFS**: a token walks the
//!   tree depth-first, one edge per round, idling one round at every node it
//!   visits first; a first visit launches that node's BFS wave. Waves are
//!   pure relaxations: each `(source, distance)` improvement is queued per
//!   port and flushed as bandwidth allows, so correctness does not depend on
//!   the schedule; the token staggering just keeps queues short. Nodes halt
//!   on a round clock at `5n + 6`.
//! * after the clock (eccentricity mode only) — each node takes the maximum
//!   of its distance vector, a convergecast up the tree folds max and min,
//!   and a broadcast brings diameter and radius back down; nodes halt as the
//!   broadcast passes them.
//!
//! Wave announcements defer to whatever per-edge budget the engine enforces,
//! but the flood and aggregation messages (tag plus two id-width fields) are
//! sent unconditionally, so the programs need `beta >= 4` to run at every
//! size; `beta = 3` works from `n >= 8`.

use std::collections::VecDeque;

use crate::sim::{id_bits, Message, NodeCtx, NodeOutput, NodeProgram, RoundOutcome, TAG_BITS};

const TAG_LEAD: u8 = 0;
const TAG_TOKEN: u8 = 1;
const TAG_DIST: u8 = 2;
const TAG_ECC_UP: u8 = 3;
const TAG_ECC_DOWN: u8 = 4;

/// Round by which the flood has settled and children are known.
fn tree_done(n: usize) -> usize {
    n + 2
}

/// Clock at which the distance vectors are complete and nodes halt (or, in
/// eccentricity mode, switch to aggregation).
fn apsp_done(n: usize) -> usize {
    5 * n + 6
}

/// A round limit that comfortably covers every phase, including the tree
/// aggregation tail; pass it to `SimConfig::max_rounds`.
pub fn suggested_max_rounds(n: usize) -> usize {
    8 * n + 16
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Tree,
    Apsp,
    Ecc,
}

/// Leader election + BFS tree: after at most `n + 1` communication rounds
/// every node outputs the leader (minimum id), its BFS depth, its parent
/// port and its child ports.
pub fn leader_bfs_tree() -> DistanceProgram {
    DistanceProgram { mode: Mode::Tree }
}

/// All-pairs shortest paths: every node outputs its full distance vector,
/// equal to the BFS oracle row, within `5n + 6` rounds.
pub fn pipelined_apsp() -> DistanceProgram {
    DistanceProgram { mode: Mode::Apsp }
}

/// Eccentricities, diameter and radius: every node outputs its exact
/// eccentricity together with the graph's diameter and radius.
pub fn ecc_diameter_radius() -> DistanceProgram {
    DistanceProgram { mode: Mode::Ecc }
}

#[derive(Debug, Clone, Copy)]
pub struct DistanceProgram {
    mode: Mode,
}

pub struct DistanceState {
    round: usize,
    // flood
    leader: usize,
    depth: u32,
    parent: Option<usize>,
    claims: Vec<bool>,
    children: Vec<usize>,
    // token walk
    token_visited: bool,
    has_token: bool,
    token_pause: bool,
    next_child: usize,
    // distance vectors
    dist: Vec<Option<u32>>,
    queues: Vec<VecDeque<usize>>,
    queued: Vec<Vec<bool>>,
    // aggregation
    my_ecc: u32,
    agg_max: u32,
    agg_min: u32,
    up_received: usize,
    sent_up: bool,
}

impl DistanceState {
    fn enqueue(&mut self, port: usize, src: usize) {
        if !self.queued[port][src] {
            self.queued[port][src] = true;
            self.queues[port].push_back(src);
        }
    }

    fn launch_wave(&mut self, ctx: &NodeCtx) {
        self.dist[ctx.id] = Some(0);
        for port in 0..ctx.degree {
            self.enqueue(port, ctx.id);
        }
    }

    fn tree_output(&self) -> NodeOutput {
        NodeOutput::Tree {
            leader: self.leader,
            depth: self.depth,
            parent_port: self.parent,
            child_ports: self.children.clone(),
        }
    }
}

impl NodeProgram for DistanceProgram {
    type State = DistanceState;

    fn init(&self, ctx: &NodeCtx) -> DistanceState {
        DistanceState {
            round: 0,
            leader: ctx.id,
            depth: 0,
            parent: None,
            claims: vec![false; ctx.degree],
            children: Vec::new(),
            token_visited: false,
            has_token: false,
            token_pause: false,
            next_child: 0,
            dist: vec![None; ctx.n],
            queues: vec![VecDeque::new(); ctx.degree],
            queued: vec![vec![false; ctx.n]; ctx.degree],
            my_ecc: 0,
            agg_max: 0,
            agg_min: 0,
            up_received: 0,
            sent_up: false,
        }
    }

    fn on_round(
        &self,
        s: &mut DistanceState,
        ctx: &NodeCtx,
        inbox: &[(usize, Message)],
    ) -> RoundOutcome {
        s.round += 1;
        let n = ctx.n;
        let w = id_bits(n) as u8;
        let mut out = RoundOutcome::default();

        if n == 1 {
            out.halt = Some(match self.mode {
                Mode::Tree => s.tree_output(),
                Mode::Apsp => NodeOutput::Distances(vec![0]),
                Mode::Ecc => NodeOutput::Ecc {
                    ecc: 0,
                    diameter: 0,
                    radius: 0,
                },
            });
            return out;
        }

        // ---- flood phase ---------------------------------------------
        if s.round == 1 {
            for port in 0..ctx.degree {
                out.send(
                    port,
                    Message::new(TAG_LEAD)
                        .with(s.leader as u64, w)
                        .with(s.depth as u64, w)
                        .with(0, 1),
                );
            }
        } else {
            let mut best: Option<(usize, u32, usize)> = None;
            for &(port, ref msg) in inbox {
                if msg.tag != TAG_LEAD {
                    continue;
                }
                let claimed = (msg.field(0) as usize, msg.field(1) as u32 + 1);
                s.claims[port] = msg.field(2) == 1;
                let better = match best {
                    None => true,
                    Some((bl, bd, _)) => claimed < (bl, bd),
                };
                if better {
                    best = Some((claimed.0, claimed.1, port));
                }
            }
            if let Some((leader, depth, port)) = best {
                if (leader, depth) < (s.leader, s.depth) {
                    s.leader = leader;
                    s.depth = depth;
                    s.parent = Some(port);
                    for p in 0..ctx.degree {
                        let flag = (p == port) as u64;
                        out.send(
                            p,
                            Message::new(TAG_LEAD)
                                .with(s.leader as u64, w)
                                .with(s.depth as u64, w)
                                .with(flag, 1),
                        );
                    }
                }
            }
        }

        if s.round == tree_done(n) {
            s.children = (0..ctx.degree).filter(|&p| s.claims[p]).collect();
            if self.mode == Mode::Tree {
                out.halt = Some(s.tree_output());
                return out;
            }
            if s.leader == ctx.id {
                // The root starts holding the token: first visit.
                s.has_token = true;
                s.token_visited = true;
                s.token_pause = true;
                s.launch_wave(ctx);
            }
        }

        // ---- token walk and wave relaxation --------------------------
        // Receipts are processed through the clock round itself, so bits
        // sent in the final pre-clock round still land in the output;
        // sends stop one round before the clock.
        if s.round >= tree_done(n) {
            for &(port, ref msg) in inbox {
                match msg.tag {
                    TAG_TOKEN => {
                        s.has_token = true;
                        if !s.token_visited {
                            s.token_visited = true;
                            s.token_pause = true;
                            s.launch_wave(ctx);
                            debug_assert_eq!(Some(port), s.parent);
                        }
                    }
                    TAG_DIST => {
                        let src = msg.field(0) as usize;
                        let cand = msg.field(1) as u32 + 1;
                        if s.dist[src].is_none_or(|cur| cand < cur) {
                            s.dist[src] = Some(cand);
                            for p in (0..ctx.degree).filter(|&p| p != port) {
                                s.enqueue(p, src);
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        if s.round >= tree_done(n) && s.round < apsp_done(n) {
            let mut port_bits = vec![0usize; ctx.degree];
            if s.has_token {
                if s.token_pause {
                    s.token_pause = false;
                } else {
                    let next = if s.next_child < s.children.len() {
                        s.next_child += 1;
                        Some(s.children[s.next_child - 1])
                    } else {
                        s.parent // None at the root: tour complete
                    };
                    if let Some(port) = next {
                        port_bits[port] += TAG_BITS;
                        out.send(port, Message::new(TAG_TOKEN));
                    }
                    s.has_token = false;
                }
            }
            let budget = ctx.bandwidth_bits;
            let dist_bits = TAG_BITS + 2 * w as usize;
            for (port, used) in port_bits.iter_mut().enumerate() {
                while !s.queues[port].is_empty() && *used + dist_bits <= budget {
                    let src = s.queues[port].pop_front().expect("checked non-empty");
                    s.queued[port][src] = false;
                    let d = s.dist[src].expect("queued sources have a distance");
                    *used += dist_bits;
                    out.send(
                        port,
                        Message::new(TAG_DIST).with(src as u64, w).with(d as u64, w),
                    );
                }
            }
        }

        if s.round == apsp_done(n) {
            match self.mode {
                Mode::Tree => unreachable!("tree mode halted earlier"),
                Mode::Apsp => {
                    out.halt = Some(NodeOutput::Distances(collect_distances(&s.dist)));
                    return out;
                }
                Mode::Ecc => {
                    s.my_ecc = collect_distances(&s.dist).into_iter().max().unwrap_or(0);
                    s.agg_max = s.my_ecc;
                    s.agg_min = s.my_ecc;
                }
            }
        }

        // ---- eccentricity aggregation over the tree -------------------
        if self.mode == Mode::Ecc && s.round >= apsp_done(n) {
            for (_, msg) in inbox {
                match msg.tag {
                    TAG_ECC_UP => {
                        s.agg_max = s.agg_max.max(msg.field(0) as u32);
                        s.agg_min = s.agg_min.min(msg.field(1) as u32);
                        s.up_received += 1;
                    }
                    TAG_ECC_DOWN => {
                        let (diameter, radius) = (msg.field(0) as u32, msg.field(1) as u32);
                        for &port in &s.children {
                            out.send(
                                port,
                                Message::new(TAG_ECC_DOWN)
                                    .with(diameter as u64, w)
                                    .with(radius as u64, w),
                            );
                        }
                        out.halt = Some(NodeOutput::Ecc {
                            ecc: s.my_ecc,
                            diameter,
                            radius,
                        });
                        return out;
                    }
                    _ => {}
                }
            }
            if !s.sent_up && s.up_received == s.children.len() {
                s.sent_up = true;
                match s.parent {
                    Some(port) => out.send(
                        port,
                        Message::new(TAG_ECC_UP)
                            .with(s.agg_max as u64, w)
                            .with(s.agg_min as u64, w),
                    ),
                    None => {
                        // Root: the fold is complete, start the broadcast.
                        for &port in &s.children {
                            out.send(
                                port,
                                Message::new(TAG_ECC_DOWN)
                                    .with(s.agg_max as u64, w)
                                    .with(s.agg_min as u64, w),
                            );
                        }
                        out.halt = Some(NodeOutput::Ecc {
                            ecc: s.my_ecc,
                            diameter: s.agg_max,
                            radius: s.agg_min,
                        });
                    }
                }
            }
        }
        out
    }
}

fn collect_distances(dist: &[Option<u32>]) -> Vec<u32> {
    // A missing entry means a wave never arrived; surface it as a loud
    // sentinel rather than a plausible distance.
    dist.iter().map(|d| d.unwrap_or(u32::MAX)).collect()
}
