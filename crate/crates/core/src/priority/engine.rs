//! The stage-by-stage construction on the tree of strategies.
//!
//! Node `α` of depth `d` asks whether infinitely many `α`-allowed balls
//! below it enter `W_d`; outcome codes are `answer · G + guess` with answer
//! 0 for yes, where the guess names the winner of the `⟨e,k,l⟩` selection at
//! the child. Every tree `k < |α|` keeps its own `M`, `D`, `H` and markers at
//! `α` over the shared `R_α`, `E_α`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::config::{Mode, RunConfig};
use super::estate::{ekl_argmax, estate_of, untriple, StoreStats};
use super::listing::Listing;
use super::maximal::{estate_string, MaximalSet};
use super::split::{part_layout, Dest, Rotation};
use super::trace::{
    common_prefix, left_of, path_str, Dump, DumpTarget, Header, MarkerRecord, Move, MoveKind,
    Path, PartRecord, Side, StageRecord, Trace,
};
use crate::effective::Enumerator;
use crate::error::Result;
use crate::tree::{FiniteTree, Node};

#[derive(Debug, Clone)]
struct Ball {
    pos: Path,
    allowed: Vec<Path>,
}

#[derive(Debug, Clone)]
struct TreeStore {
    layout: Vec<Dest>,
    max: MaximalSet,
    m_stats: StoreStats,
    even: Rotation,
    odd: Rotation,
    /// Indices `j` with `p(j)` already taken into `M` (hemimaximal only).
    hemi: Option<BTreeSet<usize>>,
    shown: Vec<Option<(u64, String, u64)>>,
}

#[derive(Debug, Clone)]
struct NodeState {
    r: Vec<u64>,
    e: Vec<u64>,
    r_stats: StoreStats,
    seen: HashSet<u64>,
    seen_at_visit: usize,
    last_pull: u64,
    trees: Vec<TreeStore>,
}

/// Read-only view of a node's stores.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeView {
    pub r: Vec<u64>,
    pub e: Vec<u64>,
    /// `M^k_α` per tree.
    pub m: Vec<BTreeSet<u64>>,
    /// Current markers `Γ^{α,k}_0, Γ^{α,k}_1, …` per tree.
    pub markers: Vec<Vec<u64>>,
}

struct Hemi {
    m: Enumerator,
    h: Enumerator,
}

pub struct Engine {
    cfg: RunConfig,
    enums: Vec<Enumerator>,
    hemi: Option<Hemi>,
    listing: Listing,
    ne: usize,
    g: u64,
    stage: u64,
    f_prev: Path,
    /// Last stage whose approximation passed through the node.
    last_through: HashMap<Path, u64>,
    balls: Vec<Ball>,
    free: BTreeSet<u64>,
    wmask: Vec<u64>,
    r_home: HashMap<u64, Path>,
    nodes: BTreeMap<Path, NodeState>,
}

impl Engine {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.validate()?;
        let enums = cfg
            .enumerators
            .iter()
            .map(|e| e.build())
            .collect::<Result<Vec<_>>>()?;
        let hemi = match &cfg.mode {
            Mode::Standard => None,
            Mode::Hemimaximal(h) => Some(Hemi {
                m: h.m.build()?,
                h: h.h.build()?,
            }),
        };
        Ok(Engine {
            ne: enums.len(),
            g: cfg.guess_alphabet,
            enums,
            hemi,
            listing: Listing::new(),
            stage: 0,
            f_prev: Vec::new(),
            last_through: HashMap::new(),
            // ball 0 is never created; ids are creation stages
            balls: vec![Ball {
                pos: Vec::new(),
                allowed: Vec::new(),
            }],
            free: BTreeSet::new(),
            wmask: Vec::new(),
            r_home: HashMap::new(),
            nodes: BTreeMap::new(),
            cfg,
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn header(&self) -> Header {
        Header {
            run_id: self.cfg.run_id(),
            config: self.cfg.clone(),
            tree: None,
        }
    }

    /// Last completed stage.
    pub fn stage(&self) -> u64 {
        self.stage
    }

    pub fn ball_position(&self, x: u64) -> Option<&[u64]> {
        (x >= 1 && x <= self.stage).then(|| self.balls[x as usize].pos.as_slice())
    }

    pub fn is_allowed(&self, x: u64, at: &[u64]) -> bool {
        x >= 1
            && x <= self.stage
            && self.balls[x as usize].allowed.iter().any(|a| a == at)
    }

    pub fn node(&self, path: &[u64]) -> Option<NodeView> {
        let n = self.nodes.get(path)?;
        Some(NodeView {
            r: n.r.clone(),
            e: n.e.clone(),
            m: n.trees.iter().map(|t| t.max.members().clone()).collect(),
            markers: n.trees.iter().map(|t| t.max.markers().to_vec()).collect(),
        })
    }

    /// Runs every configured stage.
    pub fn run(cfg: RunConfig) -> Result<Trace> {
        let mut eng = Engine::new(cfg)?;
        let header = eng.header();
        let stages = (0..eng.cfg.stages).map(|_| eng.step()).collect();
        Ok(Trace { header, stages })
    }

    fn role(&mut self, depth: usize) -> (Node, u64) {
        self.listing.get(depth)
    }

    fn mask(&self, x: u64) -> u64 {
        self.wmask.get(x as usize).copied().unwrap_or(0)
    }

    fn in_w(&self, x: u64, e: usize) -> bool {
        e < self.ne && (self.mask(x) >> e) & 1 == 1
    }

    fn ensure_node(&mut self, path: &[u64]) {
        if self.nodes.contains_key(path) {
            return;
        }
        let d = path.len();
        let splits = self.cfg.splits.len();
        let mut trees = Vec::new();
        for k in 0..d.min(self.cfg.trees.len()) {
            let (chi, i) = self.role(d - k);
            let layout = part_layout(&chi, i, &self.cfg.trees[k], k, &mut self.listing);
            let parts = layout.len();
            let hemi = (self.hemi.is_some() && chi.is_empty()).then(BTreeSet::new);
            trees.push(TreeStore {
                layout,
                max: MaximalSet::new(),
                m_stats: StoreStats::new(self.ne, splits),
                even: Rotation::new(parts),
                odd: Rotation::new(parts),
                hemi,
                shown: vec![None; self.cfg.marker_window],
            });
        }
        self.nodes.insert(
            path.to_vec(),
            NodeState {
                r: Vec::new(),
                e: Vec::new(),
                r_stats: StoreStats::new(self.ne, splits),
                seen: HashSet::new(),
                seen_at_visit: 0,
                last_pull: 0,
                trees,
            },
        );
    }

    fn set_bit(&mut self, x: u64, e: usize) {
        let xi = x as usize;
        if self.wmask.len() <= xi {
            self.wmask.resize(xi + 1, 0);
        }
        let old = self.wmask[xi];
        let new = old | (1 << e);
        if old == new {
            return;
        }
        self.wmask[xi] = new;
        if let Some(home) = self.r_home.get(&x) {
            let splits = &self.cfg.splits;
            let node = self.nodes.get_mut(home).expect("home node exists");
            node.r_stats.update(old, new, splits);
            for t in &mut node.trees {
                if t.max.contains(x) {
                    t.m_stats.update(old, new, splits);
                }
            }
        }
    }

    /// Last stage `t` with `f_t <_L α`, or 0.
    fn left_stamp(&self, alpha: &[u64]) -> u64 {
        let mut best = 0;
        for i in 0..alpha.len() {
            let mut node = alpha[..i].to_vec();
            node.push(0);
            for o in 0..alpha[i] {
                node[i] = o;
                if let Some(&t) = self.last_through.get(&node) {
                    best = best.max(t);
                }
            }
        }
        best
    }

    /// Whether the cumulative set of balls meeting the question at `α`
    /// grew since `α`'s last visit.
    fn answer(&mut self, alpha: &[u64]) -> u64 {
        let e = alpha.len();
        let hits: Vec<u64> = self
            .free
            .iter()
            .copied()
            .filter(|&x| {
                let b = &self.balls[x as usize];
                b.pos.starts_with(alpha)
                    && b.allowed.iter().any(|a| a == alpha)
                    && self.in_w(x, e)
            })
            .collect();
        let node = self.nodes.get_mut(alpha).expect("visited node exists");
        node.seen.extend(hits);
        let yes = node.seen.len() > node.seen_at_visit;
        node.seen_at_visit = node.seen.len();
        if yes {
            0
        } else {
            1
        }
    }

    /// Distinct `i'` with `l(b) = (ξ, i')`, `|ξ| = n`, for `b` in `1..=upto`.
    fn ekl_candidates(&mut self, n: usize, upto: usize) -> Vec<u64> {
        let mut out = Vec::new();
        for b in 1..=upto {
            let (xi, i2) = self.role(b);
            if xi.len() == n && !out.contains(&i2) {
                out.push(i2);
            }
        }
        out
    }

    /// The `⟨e,k,l⟩`-state string of candidate `i'` as seen from `path`.
    fn state_string(&mut self, path: &[u64], n: usize, i2: u64) -> Vec<u8> {
        let d = path.len();
        let ntrees = self.cfg.trees.len();
        let mut out = Vec::with_capacity(self.cfg.ekl_triples as usize);
        for m in 0..self.cfg.ekl_triples {
            let (e, k, l) = untriple(m);
            let (e, k, l) = (e as usize, k as usize, l as usize);
            let mut entry = 0;
            if k < ntrees {
                let group: Vec<usize> = ((k + 1)..=d)
                    .filter(|&b| {
                        let (xi, i) = self.role(b - k);
                        i == i2 && xi.len() == n
                    })
                    .collect();
                if let Some(&b) = group.get(l) {
                    let node = &self.nodes[&path[..b]];
                    entry = estate_of(
                        &node.r_stats,
                        &node.trees[k].m_stats,
                        e,
                        &self.cfg.splits,
                        self.cfg.threshold,
                    );
                }
            }
            out.push(entry);
        }
        out
    }

    fn guess_for_child(&mut self, alpha: &[u64]) -> u64 {
        let d = alpha.len();
        let (chi, _) = self.role(d + 1);
        let cands = self.ekl_candidates(chi.len(), d + 1);
        if cands.len() < 2 {
            return 0;
        }
        let strings: Vec<Vec<u8>> = cands
            .iter()
            .map(|&i2| self.state_string(alpha, chi.len(), i2))
            .collect();
        let best = ekl_argmax(&strings).unwrap_or(0) as u64;
        best.min(self.g - 1)
    }

    fn compute_f(&mut self) -> Path {
        let mut f = Vec::with_capacity(self.cfg.max_depth);
        for _ in 0..self.cfg.max_depth {
            self.ensure_node(&f);
            let ans = self.answer(&f);
            let g = self.guess_for_child(&f);
            f.push(ans * self.g + g);
        }
        self.ensure_node(&f);
        f
    }

    fn distribute(
        &mut self,
        alpha: &[u64],
        k: usize,
        side: Side,
        x: u64,
        part: Option<usize>,
        rec: &mut StageRecord,
    ) {
        let t = &mut self.nodes.get_mut(alpha).expect("node").trees[k];
        let rot = match side {
            Side::Even => &mut t.even,
            Side::Odd => &mut t.odd,
        };
        let part = match part {
            Some(p) => {
                rot.record(p);
                p
            }
            None if side == Side::Even && t.hemi.is_some() => {
                rot.assign_in(1..t.layout.len())
            }
            None => rot.assign(),
        };
        let key = match &t.layout[part] {
            Dest::D { depth, .. } => format!("D@{k}:{}", path_str(&alpha[..*depth])),
            Dest::H => format!("H@{k}:{}", path_str(alpha)),
        };
        rec.enumerate(key, x);
        rec.parts.push(PartRecord {
            k,
            path: path_str(alpha),
            side,
            part,
            x,
        });
    }

    /// `x` joins `M^k_α`.
    fn enter_m(&mut self, alpha: &[u64], k: usize, x: u64, part: Option<usize>, rec: &mut StageRecord) {
        let mask = self.mask(x);
        let splits = self.cfg.splits.clone();
        self.nodes.get_mut(alpha).expect("node").trees[k]
            .m_stats
            .add(mask, &splits);
        rec.enumerate(format!("M@{k}:{}", path_str(alpha)), x);
        self.distribute(alpha, k, Side::Even, x, part, rec);
    }

    fn move_ball(&mut self, x: u64, to: &[u64], kind: MoveKind, rec: &mut StageRecord) {
        let b = &mut self.balls[x as usize];
        if b.pos != to {
            rec.moves.push(Move {
                x,
                from: path_str(&b.pos),
                to: path_str(to),
                kind,
            });
            b.pos = to.to_vec();
        }
    }

    fn pull_three(&mut self, alpha: &[u64], s: u64, rec: &mut StageRecord) {
        let d = alpha.len();
        let parent = &alpha[..d - 1];
        let yes = alpha[d - 1] / self.g == 0;
        let last_pull = self.nodes[alpha].last_pull;
        let picked: Vec<u64> = self
            .free
            .iter()
            .copied()
            .filter(|&x| {
                let b = &self.balls[x as usize];
                x > last_pull
                    && b.pos.starts_with(parent)
                    && !left_of(&b.pos, alpha)
                    && b.allowed.iter().any(|a| a == parent)
                    && !b.allowed.iter().any(|a| a == alpha)
                    && (!yes || self.in_w(x, d - 1))
            })
            .take(3)
            .collect();
        let [x1, x2, x3] = picked[..] else {
            return;
        };
        let ntrees = self.nodes[alpha].trees.len();
        let here = path_str(alpha);
        for x in [x1, x2, x3] {
            self.move_ball(x, alpha, MoveKind::Pull, rec);
        }

        self.free.remove(&x1);
        self.nodes.get_mut(alpha).unwrap().e.push(x1);
        rec.enumerate(format!("E@{here}"), x1);
        for k in 0..ntrees {
            self.distribute(alpha, k, Side::Odd, x1, None, rec);
        }

        self.free.remove(&x2);
        let mask = self.mask(x2);
        let node = self.nodes.get_mut(alpha).unwrap();
        node.r.push(x2);
        node.r_stats.add(mask, &self.cfg.splits);
        for t in &mut node.trees {
            t.max.push_r(x2);
        }
        self.r_home.insert(x2, alpha.to_vec());
        rec.enumerate(format!("R@{here}"), x2);

        self.balls[x3 as usize].allowed.push(alpha.to_vec());
        rec.allowed.push((x3, here.clone()));

        let stragglers: Vec<u64> = self
            .free
            .iter()
            .copied()
            .filter(|&y| {
                let b = &self.balls[y as usize];
                b.pos == alpha && !b.allowed.iter().any(|a| a == alpha)
            })
            .collect();
        for y in stragglers {
            self.free.remove(&y);
            self.nodes.get_mut(alpha).unwrap().e.push(y);
            rec.enumerate(format!("E@{here}"), y);
            for k in 0..ntrees {
                rec.enumerate(format!("H@{k}:{here}"), y);
            }
        }
        self.nodes.get_mut(alpha).unwrap().last_pull = s;
    }

    fn maximal_step(&mut self, alpha: &[u64], k: usize, rec: &mut StageRecord) {
        let ne = self.ne;
        let wmask = &self.wmask;
        let pull = self.nodes.get_mut(alpha).unwrap().trees[k]
            .max
            .soare_pull(ne, |x| wmask.get(x as usize).copied().unwrap_or(0));
        if let Some(p) = pull {
            for x in p.dumped {
                self.enter_m(alpha, k, x, None, rec);
            }
        }
    }

    /// `M^k_α` takes in `p(M_s)`, with `p(j)` the `j`-th element of `R_α`.
    fn hemi_step(&mut self, alpha: &[u64], k: usize, s: u64, rec: &mut StageRecord) {
        let hemi = self.hemi.as_ref().expect("hemimaximal mode");
        let node = &self.nodes[alpha];
        let taken = node.trees[k].hemi.as_ref().expect("hemi store");
        let fresh: Vec<(usize, u64, bool)> = node
            .r
            .iter()
            .enumerate()
            .filter(|(j, _)| !taken.contains(j) && hemi.m.contains_at(*j as u64, s))
            .map(|(j, &y)| (j, y, hemi.h.contains_at(j as u64, s)))
            .collect();
        for (j, y, in_h) in fresh {
            let t = &mut self.nodes.get_mut(alpha).unwrap().trees[k];
            t.hemi.as_mut().unwrap().insert(j);
            if t.max.absorb(y) {
                self.enter_m(alpha, k, y, in_h.then_some(0), rec);
            }
        }
    }

    fn ekl_dumps(&mut self, alpha: &[u64], rec: &mut StageRecord) {
        let d = alpha.len();
        let (chi, _) = self.role(d);
        let n = chi.len();
        let cands = self.ekl_candidates(n, d);
        if cands.is_empty() {
            return;
        }
        let winner = ((alpha[d - 1] % self.g) as usize).min(cands.len() - 1);
        let trees: Vec<usize> = if self.cfg.homogeneity_sync {
            (0..self.cfg.trees.len()).collect()
        } else {
            vec![0]
        };
        for (idx, &i2) in cands.iter().enumerate() {
            if idx == winner {
                continue;
            }
            for &k in &trees {
                let mut targets = Vec::new();
                for b in (k + 1)..=d {
                    let (xi, i) = self.role(b - k);
                    if i != i2 || xi.len() != n || !self.cfg.trees[k].contains(&xi) {
                        continue;
                    }
                    let gamma = &alpha[..b];
                    let x = self.nodes.get_mut(gamma).unwrap().trees[k]
                        .max
                        .dump_marker(d);
                    if let Some(x) = x {
                        self.enter_m(gamma, k, x, None, rec);
                    }
                    targets.push(DumpTarget {
                        path: path_str(gamma),
                        x,
                    });
                }
                rec.dumps.push(Dump {
                    k,
                    n,
                    i: i2,
                    p: d,
                    at: path_str(alpha),
                    targets,
                });
            }
        }
    }

    fn emit_markers(&mut self, f: &[u64], rec: &mut StageRecord) {
        let ne = self.ne;
        for d in 1..=f.len() {
            let alpha = &f[..d];
            let here = path_str(alpha);
            let wmask = &self.wmask;
            let node = self.nodes.get_mut(alpha).unwrap();
            for (k, t) in node.trees.iter_mut().enumerate() {
                for e in 0..t.shown.len() {
                    let cur = t.max.marker(e).map(|x| {
                        let len = if ne == 0 { 0 } else { e.min(ne - 1) + 1 };
                        let mask = wmask.get(x as usize).copied().unwrap_or(0);
                        (x, estate_string(mask, len), t.max.generation(e))
                    });
                    if cur != t.shown[e] {
                        if let Some((x, state, gen)) = &cur {
                            rec.markers.push(MarkerRecord {
                                k,
                                path: here.clone(),
                                e,
                                x: *x,
                                state: state.clone(),
                                gen: *gen,
                            });
                        }
                        t.shown[e] = cur;
                    }
                }
            }
        }
    }

    /// Runs stage `stage + 1` and returns its trace record.
    pub fn step(&mut self) -> StageRecord {
        let s = self.stage + 1;
        let mut rec = StageRecord {
            s,
            ..Default::default()
        };
        for e in 0..self.ne {
            for x in self.enums[e].entered_at(s) {
                self.set_bit(x, e);
            }
        }
        self.balls.push(Ball {
            pos: Vec::new(),
            allowed: vec![Vec::new()],
        });
        self.free.insert(s);

        let f = self.compute_f();
        rec.f = f.clone();
        for b in 1..=f.len() {
            self.last_through.insert(f[..b].to_vec(), s);
        }

        let free: Vec<u64> = self.free.iter().copied().collect();
        for &x in &free {
            let pos = &self.balls[x as usize].pos;
            if left_of(&f, pos) {
                let to = common_prefix(&f, pos);
                self.move_ball(x, &to, MoveKind::Shift, &mut rec);
            }
        }
        for &x in &free {
            let b = &self.balls[x as usize];
            let d = b.pos.len();
            if d >= self.f_prev.len()
                || !self.f_prev.starts_with(&b.pos)
                || !b.allowed.contains(&b.pos)
            {
                continue;
            }
            let child = self.f_prev[..d + 1].to_vec();
            if self.left_stamp(&child) < x {
                self.move_ball(x, &child, MoveKind::Down, &mut rec);
            }
        }

        for d in 1..=f.len() {
            let alpha = &f[..d];
            self.pull_three(alpha, s, &mut rec);
            for k in 0..self.nodes[alpha].trees.len() {
                if self.nodes[alpha].trees[k].hemi.is_some() {
                    self.hemi_step(alpha, k, s, &mut rec);
                } else {
                    self.maximal_step(alpha, k, &mut rec);
                }
            }
            self.ekl_dumps(alpha, &mut rec);
        }
        self.emit_markers(&f, &mut rec);

        self.f_prev = f;
        self.stage = s;
        rec
    }
}

/// Nodes `γ ⪯ α` (given by depth) whose stores for tree `k` are hit by the
/// dump decision `(n, i)`.
pub fn dump_target_depths(
    listing: &mut Listing,
    tree: &FiniteTree,
    k: usize,
    depth: usize,
    n: usize,
    i: u64,
) -> Vec<usize> {
    ((k + 1)..=depth)
        .filter(|&b| {
            let (xi, i2) = listing.get(b - k);
            i2 == i && xi.len() == n && tree.contains(&xi)
        })
        .collect()
}
