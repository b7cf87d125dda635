//! Deterministic round-synchronous message-passing engine with per-edge
//! bandwidth enforcement, bit accounting and cut-transcript extraction.
//!
//! Execution model: all nodes run the same [`NodeProgram`]. Each round the
//! engine delivers the messages sent in the previous round, then calls every
//! live node once; the node reads its inbox, updates local state, emits
//! messages per port and may halt with an output. A node may send at most
//! [`bandwidth_bits`] bits per directed edge per round; exceeding the budget
//! is a hard error, not a silent queue.
//!
//! `rounds_used` counts communication rounds: the index of the last round in
//! which any bits were sent. A program that halts immediately without
//! sending uses 0 rounds, and trailing computation-only rounds (nodes idling
//! toward a phase clock) are free.
//!
//! The engine itself is seedless-deterministic: nodes are stepped in index
//! order and inboxes are ordered by sending port, so identical inputs give
//! bit-identical results. The config seed is only handed to programs.

use std::collections::BTreeMap;

use serde::Serialize;
use smallvec::SmallVec;

use crate::dist::bfs;
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

/// Width of the message kind tag, in bits.
pub const TAG_BITS: usize = 3;

/// Bits permitted per directed edge per round: `beta * ceil(log2(n + 1))`.
pub fn bandwidth_bits(n: usize, beta: usize) -> usize {
    beta * id_bits(n)
}

/// Bits needed to carry a node id or hop distance: `ceil(log2(n + 1))`.
pub fn id_bits(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// Engine configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    /// Bandwidth multiplier: the hidden constant of the per-round message
    /// size. Default 4 leaves headroom for a (tag, id, distance) triple.
    pub beta: usize,
    pub max_rounds: usize,
    /// Forwarded to programs; the engine takes no random decisions.
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            beta: 4,
            max_rounds: 10_000,
            seed: 0,
        }
    }
}

/// One field of a message payload: an integer with a declared bit width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Field {
    pub value: u64,
    pub bits: u8,
}

/// A message: a 3-bit kind tag plus integer fields of declared widths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub tag: u8,
    fields: SmallVec<[Field; 2]>,
}

impl Message {
    pub fn new(tag: u8) -> Self {
        assert!((tag as usize) < 1 << TAG_BITS, "tag must fit {TAG_BITS} bits");
        Message {
            tag,
            fields: SmallVec::new(),
        }
    }

    /// Appends a field. Panics if the value does not fit the width; that is
    /// a bug in the sending program, not a runtime condition.
    pub fn with(mut self, value: u64, bits: u8) -> Self {
        assert!((1..=64).contains(&bits), "field width out of range");
        assert!(
            bits == 64 || value < 1u64 << bits,
            "value {value} does not fit {bits} bits"
        );
        self.fields.push(Field { value, bits });
        self
    }

    pub fn field(&self, idx: usize) -> u64 {
        self.fields[idx].value
    }

    pub fn size_bits(&self) -> usize {
        TAG_BITS + self.fields.iter().map(|f| f.bits as usize).sum::<usize>()
    }
}

/// What a node reports when it halts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum NodeOutput {
    Value(u64),
    Distances(Vec<u32>),
    Ecc {
        ecc: u32,
        diameter: u32,
        radius: u32,
    },
    Tree {
        leader: usize,
        depth: u32,
        parent_port: Option<usize>,
        child_ports: Vec<usize>,
    },
}

/// Static per-node facts available from round one: its id, the node count,
/// its degree (ports are 0..degree, ordered by neighbor id), the per-edge
/// bandwidth being enforced, and the config seed.
#[derive(Debug, Clone, Copy)]
pub struct NodeCtx {
    pub id: usize,
    pub n: usize,
    pub degree: usize,
    pub bandwidth_bits: usize,
    pub seed: u64,
}

/// Messages to emit this round (per port) and an optional halt-with-output.
#[derive(Debug, Default)]
pub struct RoundOutcome {
    pub sends: Vec<(usize, Message)>,
    pub halt: Option<NodeOutput>,
}

impl RoundOutcome {
    pub fn send(&mut self, port: usize, msg: Message) {
        self.sends.push((port, msg));
    }
}

/// The per-node behavior contract executed by the engine.
pub trait NodeProgram {
    type State;

    fn init(&self, ctx: &NodeCtx) -> Self::State;

    /// Called once per round with the messages delivered this round, as
    /// `(port, message)` pairs ordered by port. Sends are delivered next
    /// round; returning `halt` stops the node.
    fn on_round(
        &self,
        state: &mut Self::State,
        ctx: &NodeCtx,
        inbox: &[(usize, Message)],
    ) -> RoundOutcome;
}

/// Result of a completed run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimResult {
    /// Last round in which any bits were sent (0 if none ever were).
    pub rounds_used: usize,
    /// Per-node outputs, indexed by node id.
    pub outputs: Vec<NodeOutput>,
    /// Bits sent per directed edge, per round; `edge_load[t]` is round
    /// `t + 1`, truncated at `rounds_used`.
    pub edge_load: Vec<BTreeMap<(usize, usize), usize>>,
    /// The enforced per-edge budget.
    pub bandwidth_bits: usize,
    /// Whether every node halted (always true on the `Ok` path; the round
    /// limit turns unhalted nodes into a timeout error).
    pub halted: bool,
}

/// Traffic across the declared Alice/Bob cut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutReport {
    /// Number of undirected edges with endpoints on different sides.
    pub cut_size: usize,
    /// Bits sent over cut edges, both directions, all rounds.
    pub total_cross_bits: usize,
    pub per_round_cross_bits: Vec<usize>,
    /// `rounds_used * cut_size * bandwidth_bits`, the budget the two-party
    /// simulation argument charges for the whole transcript.
    pub bound: usize,
    pub within_bound: bool,
}

/// Runs `program` on every node of a connected graph until all halt.
///
/// Deterministic given `(graph, program, config)`. Errors on bandwidth
/// violations (identifying round, edge and bits attempted) and on hitting
/// `max_rounds` with unhalted nodes.
pub fn run<P: NodeProgram>(
    graph: &LabeledGraph,
    program: &P,
    config: &SimConfig,
) -> Result<SimResult> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::input("cannot simulate an empty graph"));
    }
    if let Some(far) = bfs(graph, 0)?.iter().position(|d| !d.is_finite()) {
        return Err(Error::Disconnected(far));
    }
    let bandwidth = bandwidth_bits(n, config.beta);

    // reverse_port[u][p]: the port of u in adj[neighbor], so deliveries can
    // be labeled with the receiver's own port number.
    let reverse_port: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            graph
                .neighbors(u)
                .iter()
                .map(|&v| {
                    graph
                        .neighbors(v)
                        .binary_search(&u)
                        .expect("adjacency is symmetric")
                })
                .collect()
        })
        .collect();

    let ctxs: Vec<NodeCtx> = (0..n)
        .map(|id| NodeCtx {
            id,
            n,
            degree: graph.degree(id),
            bandwidth_bits: bandwidth,
            seed: config.seed,
        })
        .collect();
    let mut states: Vec<P::State> = ctxs.iter().map(|c| program.init(c)).collect();
    let mut outputs: Vec<Option<NodeOutput>> = vec![None; n];
    let mut halted = vec![false; n];
    let mut inboxes: Vec<Vec<(usize, Message)>> = vec![Vec::new(); n];
    let mut edge_load: Vec<BTreeMap<(usize, usize), usize>> = Vec::new();
    let mut last_traffic = 0;

    let mut round = 0;
    while halted.iter().any(|h| !h) {
        round += 1;
        if round > config.max_rounds {
            return Err(Error::Timeout {
                max_rounds: config.max_rounds,
                unhalted: halted.iter().filter(|&&h| !h).count(),
                nodes: n,
            });
        }
        let mut next_inboxes: Vec<Vec<(usize, Message)>> = vec![Vec::new(); n];
        let mut load: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for u in 0..n {
            let inbox = std::mem::take(&mut inboxes[u]);
            if halted[u] {
                continue; // mail to a halted node is dropped
            }
            let outcome = program.on_round(&mut states[u], &ctxs[u], &inbox);
            for (port, msg) in outcome.sends {
                assert!(port < graph.degree(u), "node {u} sent on missing port {port}");
                let v = graph.neighbors(u)[port];
                let used = load.entry((u, v)).or_insert(0);
                *used += msg.size_bits();
                if *used > bandwidth {
                    return Err(Error::BandwidthExceeded {
                        round,
                        from: u,
                        to: v,
                        attempted: *used,
                        limit: bandwidth,
                    });
                }
                next_inboxes[v].push((reverse_port[u][port], msg));
            }
            if let Some(out) = outcome.halt {
                halted[u] = true;
                outputs[u] = Some(out);
            }
        }
        if !load.is_empty() {
            last_traffic = round;
        }
        edge_load.push(load);
        inboxes = next_inboxes;
    }
    edge_load.truncate(last_traffic);
    Ok(SimResult {
        rounds_used: last_traffic,
        outputs: outputs
            .into_iter()
            .map(|o| o.expect("all nodes halted"))
            .collect(),
        edge_load,
        bandwidth_bits: bandwidth,
        halted: true,
    })
}

/// Sums the bits that crossed the Alice/Bob cut, per round and in total.
///
/// Requires every node of the graph to declare a side.
pub fn cut_report(result: &SimResult, graph: &LabeledGraph) -> Result<CutReport> {
    let cut = graph.cut_edges()?;
    let cut_size = cut.len();
    let per_round_cross_bits: Vec<usize> = result
        .edge_load
        .iter()
        .map(|load| {
            load.iter()
                .filter(|((u, v), _)| graph.side(*u) != graph.side(*v))
                .map(|(_, bits)| bits)
                .sum()
        })
        .collect();
    let total_cross_bits = per_round_cross_bits.iter().sum();
    let bound = result.rounds_used * cut_size * result.bandwidth_bits;
    Ok(CutReport {
        cut_size,
        total_cross_bits,
        per_round_cross_bits,
        bound,
        within_bound: total_cross_bits <= bound,
    })
}

/// JSON report: `{"rounds": r, "outputs": {...}, "cut": {...},
/// "bandwidth_bits": B}`. Outputs are keyed by node id; the cut section is
/// present only when a report is supplied.
pub fn report_json(result: &SimResult, cut: Option<&CutReport>) -> serde_json::Value {
    let mut outputs = serde_json::Map::new();
    for (u, out) in result.outputs.iter().enumerate() {
        outputs.insert(u.to_string(), serde_json::json!(out));
    }
    let mut report = serde_json::json!({
        "rounds": result.rounds_used,
        "outputs": outputs,
        "bandwidth_bits": result.bandwidth_bits,
    });
    if let Some(cut) = cut {
        report["cut"] = serde_json::json!({
            "size": cut.cut_size,
            "total_bits": cut.total_cross_bits,
            "per_round": cut.per_round_cross_bits,
            "bound": cut.bound,
            "within_bound": cut.within_bound,
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::build_line;
    use crate::graph::Side;

    fn path(n: usize) -> LabeledGraph {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        LabeledGraph::from_edges(n, &edges).unwrap()
    }

    /// Outputs its own id without ever sending.
    struct Echo;

    impl NodeProgram for Echo {
        type State = ();

        fn init(&self, _ctx: &NodeCtx) {}

        fn on_round(&self, _s: &mut (), ctx: &NodeCtx, _inbox: &[(usize, Message)]) -> RoundOutcome {
            RoundOutcome {
                sends: Vec::new(),
                halt: Some(NodeOutput::Value(ctx.id as u64)),
            }
        }
    }

    /// Floods the minimum id; halts on a round clock after n rounds.
    struct FloodMin;

    struct FloodMinState {
        round: usize,
        best: u64,
    }

    impl NodeProgram for FloodMin {
        type State = FloodMinState;

        fn init(&self, ctx: &NodeCtx) -> FloodMinState {
            FloodMinState {
                round: 0,
                best: ctx.id as u64,
            }
        }

        fn on_round(
            &self,
            s: &mut FloodMinState,
            ctx: &NodeCtx,
            inbox: &[(usize, Message)],
        ) -> RoundOutcome {
            s.round += 1;
            let w = id_bits(ctx.n) as u8;
            let mut out = RoundOutcome::default();
            if s.round == 1 {
                for port in 0..ctx.degree {
                    out.send(port, Message::new(0).with(s.best, w));
                }
            } else {
                let mut improved_from = None;
                for &(port, ref msg) in inbox {
                    if msg.field(0) < s.best {
                        s.best = msg.field(0);
                        improved_from = Some(port);
                    }
                }
                if let Some(from) = improved_from {
                    for port in (0..ctx.degree).filter(|&p| p != from) {
                        out.send(port, Message::new(0).with(s.best, w));
                    }
                }
            }
            if s.round > ctx.n {
                out.halt = Some(NodeOutput::Value(s.best));
            }
            out
        }
    }

    #[test]
    fn bandwidth_formula() {
        assert_eq!(bandwidth_bits(8, 4), 16, "ceil(log2 9) = 4");
        assert_eq!(bandwidth_bits(1, 1), 1);
        let mut prev = 0;
        for n in 1..200 {
            let b = bandwidth_bits(n, 4);
            assert!(b >= prev, "monotone in n");
            assert!(bandwidth_bits(n, 5) > b, "monotone in beta");
            prev = b;
        }
    }

    #[test]
    fn echo_uses_zero_rounds() {
        let result = run(&path(4), &Echo, &SimConfig::default()).unwrap();
        assert_eq!(result.rounds_used, 0);
        assert!(result.halted);
        assert!(result.edge_load.is_empty());
        for (u, out) in result.outputs.iter().enumerate() {
            assert_eq!(*out, NodeOutput::Value(u as u64));
        }
    }

    #[test]
    fn flood_min_on_path_of_five() {
        let result = run(&path(5), &FloodMin, &SimConfig::default()).unwrap();
        assert!(result.rounds_used <= 4, "got {}", result.rounds_used);
        for out in &result.outputs {
            assert_eq!(*out, NodeOutput::Value(0));
        }
    }

    #[test]
    fn runs_are_deterministic() {
        let g = crate::graph::random_connected(20, 32, 7).unwrap();
        let config = SimConfig::default();
        let a = run(&g, &FloodMin, &config).unwrap();
        let b = run(&g, &FloodMin, &config).unwrap();
        assert_eq!(a, b);
        let ja = report_json(&a, None).to_string();
        let jb = report_json(&b, None).to_string();
        assert_eq!(ja, jb);
    }

    /// Sends a fixed-size message on every port for three rounds and halts
    /// reporting how many bits it received; used to check that every sent
    /// bit is delivered exactly one round later.
    struct BitProbe;

    struct ProbeState {
        round: usize,
        received: u64,
    }

    impl NodeProgram for BitProbe {
        type State = ProbeState;

        fn init(&self, _ctx: &NodeCtx) -> ProbeState {
            ProbeState {
                round: 0,
                received: 0,
            }
        }

        fn on_round(
            &self,
            s: &mut ProbeState,
            ctx: &NodeCtx,
            inbox: &[(usize, Message)],
        ) -> RoundOutcome {
            s.round += 1;
            s.received += inbox.iter().map(|(_, m)| m.size_bits() as u64).sum::<u64>();
            let mut out = RoundOutcome::default();
            if s.round <= 3 {
                for port in 0..ctx.degree {
                    out.send(port, Message::new(1).with(ctx.id as u64, 7));
                }
            }
            if s.round == 5 {
                out.halt = Some(NodeOutput::Value(s.received));
            }
            out
        }
    }

    #[test]
    fn every_sent_bit_is_delivered_next_round() {
        let g = crate::graph::random_connected(12, 20, 3).unwrap();
        let result = run(&g, &BitProbe, &SimConfig::default()).unwrap();
        let sent: u64 = result
            .edge_load
            .iter()
            .flat_map(|m| m.values())
            .map(|&b| b as u64)
            .sum();
        let received: u64 = result
            .outputs
            .iter()
            .map(|o| match o {
                NodeOutput::Value(v) => *v,
                _ => unreachable!(),
            })
            .sum();
        assert_eq!(sent, received);
    }

    /// Sends two messages over the same edge in one round; the receiver
    /// checks they arrive in send order.
    struct OrderProbe;

    impl NodeProgram for OrderProbe {
        type State = usize;

        fn init(&self, _ctx: &NodeCtx) -> usize {
            0
        }

        fn on_round(
            &self,
            round: &mut usize,
            ctx: &NodeCtx,
            inbox: &[(usize, Message)],
        ) -> RoundOutcome {
            *round += 1;
            let mut out = RoundOutcome::default();
            if *round == 1 && ctx.id == 0 {
                out.send(0, Message::new(1));
                out.send(0, Message::new(2));
            }
            if *round == 2 {
                let got: Vec<u8> = inbox.iter().map(|(_, m)| m.tag).collect();
                let ok = ctx.id != 1 || got == vec![1, 2];
                out.halt = Some(NodeOutput::Value(ok as u64));
            }
            out
        }
    }

    #[test]
    fn messages_keep_send_order_within_an_edge_round() {
        let g = LabeledGraph::from_edges(2, &[(0, 1)]).unwrap();
        let result = run(&g, &OrderProbe, &SimConfig::default()).unwrap();
        assert_eq!(result.outputs[1], NodeOutput::Value(1));
    }

    /// Deliberately exceeds the per-edge budget in round 2.
    struct Hog;

    impl NodeProgram for Hog {
        type State = usize;

        fn init(&self, _ctx: &NodeCtx) -> usize {
            0
        }

        fn on_round(&self, round: &mut usize, ctx: &NodeCtx, _inbox: &[(usize, Message)]) -> RoundOutcome {
            *round += 1;
            let mut out = RoundOutcome::default();
            if *round == 2 && ctx.id == 0 {
                for _ in 0..bandwidth_bits(ctx.n, 4) {
                    out.send(0, Message::new(0).with(0, 1));
                }
            }
            if *round == 3 {
                out.halt = Some(NodeOutput::Value(0));
            }
            out
        }
    }

    #[test]
    fn bandwidth_violation_is_a_hard_error() {
        let g = LabeledGraph::from_edges(2, &[(0, 1)]).unwrap();
        match run(&g, &Hog, &SimConfig::default()) {
            Err(Error::BandwidthExceeded {
                round, from, to, attempted, limit,
            }) => {
                assert_eq!(round, 2);
                assert_eq!((from, to), (0, 1));
                assert!(attempted > limit);
            }
            other => panic!("expected bandwidth error, got {other:?}"),
        }
    }

    /// Never halts.
    struct Spin;

    impl NodeProgram for Spin {
        type State = ();

        fn init(&self, _ctx: &NodeCtx) {}

        fn on_round(&self, _s: &mut (), _ctx: &NodeCtx, _inbox: &[(usize, Message)]) -> RoundOutcome {
            RoundOutcome::default()
        }
    }

    #[test]
    fn round_limit_is_a_timeout_error() {
        let g = LabeledGraph::from_edges(2, &[(0, 1)]).unwrap();
        let config = SimConfig {
            max_rounds: 10,
            ..SimConfig::default()
        };
        assert!(matches!(
            run(&g, &Spin, &config),
            Err(Error::Timeout {
                max_rounds: 10,
                unhalted: 2,
                nodes: 2
            })
        ));
    }

    #[test]
    fn run_rejects_disconnected_graphs() {
        let g = LabeledGraph::from_edges(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            run(&g, &Echo, &SimConfig::default()),
            Err(Error::Disconnected(2))
        ));
    }

    #[test]
    fn cut_report_counts_cross_traffic_only() {
        // Echo never sends: zero bits cross.
        let mut g = path(4);
        for u in 0..4 {
            g.set_side(u, if u < 2 { Side::Alice } else { Side::Bob })
                .unwrap();
        }
        let result = run(&g, &Echo, &SimConfig::default()).unwrap();
        let cut = cut_report(&result, &g).unwrap();
        assert_eq!(cut.cut_size, 1);
        assert_eq!(cut.total_cross_bits, 0);
        assert!(cut.within_bound);
    }

    #[test]
    fn cut_report_requires_total_side_map() {
        let g = path(3); // no sides at all
        let result = run(&g, &Echo, &SimConfig::default()).unwrap();
        assert!(cut_report(&result, &g).is_err());
    }

    #[test]
    fn line_split_keeps_per_round_cross_bits_within_budget() {
        let mut g = build_line(4).unwrap();
        for u in 1..=3 {
            g.set_side(u, Side::Bob).unwrap();
        }
        let result = run(&g, &FloodMin, &SimConfig::default()).unwrap();
        let cut = cut_report(&result, &g).unwrap();
        assert_eq!(cut.cut_size, 1);
        for &bits in &cut.per_round_cross_bits {
            assert!(bits <= result.bandwidth_bits, "{bits} > budget");
        }
        assert!(cut.within_bound);
    }
}
