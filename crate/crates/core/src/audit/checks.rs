//! Stage-level checks over a trace. Each is a pure function of the trace,
//! whose header carries the configuration.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::Serialize;

use super::report::CheckResult;
use crate::effective::Enumerator;
use crate::error::{Error, Result};
use crate::priority::{
    common_prefix, dump_target_depths, left_of, parse_path, part_layout, path_str, Dump,
    Listing, Mode, MoveKind, Path, Side, Trace,
};

fn split_key(key: &str) -> Option<(&str, Option<usize>, &str)> {
    let (kind, rest) = key.split_once('@')?;
    match rest.split_once(':') {
        Some((k, path)) => Some((kind, Some(k.parse().ok()?), path)),
        None => Some((kind, None, rest)),
    }
}

/// Disjointness of the stores and `D ⊆ (R ∪ E) − H`, `M ⊆ R`.
pub fn audit_partitions(trace: &Trace) -> CheckResult {
    const NAME: &str = "partitions";
    if trace.stages.is_empty() {
        return CheckResult::na(NAME, "empty trace");
    }
    let mut home: HashMap<u64, String> = HashMap::new();
    let mut d_home: HashMap<(usize, u64), String> = HashMap::new();
    let mut h_sets: HashSet<(usize, u64)> = HashSet::new();
    let mut r_sets: HashMap<String, HashSet<u64>> = HashMap::new();
    for r in &trace.stages {
        // R and E first, so that same-stage containment is seen
        for (key, xs) in &r.enumerations {
            let Some((kind, None, path)) = split_key(key) else { continue };
            if kind != "R" && kind != "E" {
                continue;
            }
            for &x in xs {
                if let Some(prev) = home.insert(x, key.clone()) {
                    return CheckResult::fail(
                        NAME,
                        r.s,
                        Some(x),
                        vec![prev, key.clone()],
                        "element in two R/E stores",
                    );
                }
                if kind == "R" {
                    r_sets.entry(path.to_string()).or_default().insert(x);
                }
            }
        }
        for (key, xs) in &r.enumerations {
            let Some((kind, Some(k), path)) = split_key(key) else { continue };
            for &x in xs {
                match kind {
                    "D" => {
                        if let Some(prev) = d_home.insert((k, x), key.clone()) {
                            return CheckResult::fail(
                                NAME,
                                r.s,
                                Some(x),
                                vec![prev, key.clone()],
                                "D sets of one tree overlap",
                            );
                        }
                        if !home.contains_key(&x) {
                            return CheckResult::fail(
                                NAME,
                                r.s,
                                Some(x),
                                vec![key.clone()],
                                "D element outside every R and E",
                            );
                        }
                    }
                    "H" => {
                        h_sets.insert((k, x));
                    }
                    "M" => {
                        if !r_sets.get(path).is_some_and(|s| s.contains(&x)) {
                            return CheckResult::fail(
                                NAME,
                                r.s,
                                Some(x),
                                vec![key.clone(), format!("R@{path}")],
                                "M element outside its R",
                            );
                        }
                    }
                    _ => {}
                }
            }
        }
        for key in r.enumerations.keys() {
            let Some((kind, Some(k), _)) = split_key(key) else { continue };
            if kind != "D" && kind != "H" {
                continue;
            }
            for &x in &r.enumerations[key] {
                if h_sets.contains(&(k, x)) && d_home.contains_key(&(k, x)) {
                    return CheckResult::fail(
                        NAME,
                        r.s,
                        Some(x),
                        vec![d_home[&(k, x)].clone(), format!("H@{k}")],
                        "element in both D and H",
                    );
                }
            }
        }
    }
    CheckResult::pass(
        NAME,
        format!(
            "{} R/E elements, {} D elements across trees",
            home.len(),
            d_home.len()
        ),
    )
}

/// Last stage whose approximation ran strictly left of `alpha`.
fn left_stamp(last_through: &HashMap<Path, u64>, alpha: &[u64]) -> u64 {
    let mut best = 0;
    for (node, &t) in last_through {
        if left_of(node, alpha) {
            best = best.max(t);
        }
    }
    best
}

/// Ball positions replayed from the moves: shifts go exactly to the common
/// prefix, downward moves follow an allowed ball onto the previous
/// approximation, and no unstored ball ends a stage right of `f_s`.
pub fn audit_ball_discipline(trace: &Trace) -> CheckResult {
    const NAME: &str = "discipline";
    if trace.stages.is_empty() {
        return CheckResult::na(NAME, "empty trace");
    }
    let mut pos: HashMap<u64, Path> = HashMap::new();
    let mut allowed: HashMap<u64, Vec<Path>> = HashMap::new();
    let mut free: BTreeSet<u64> = BTreeSet::new();
    let mut last_through: HashMap<Path, u64> = HashMap::new();
    let mut prev_f: Path = Vec::new();
    let mut checked = 0usize;
    for r in &trace.stages {
        let s = r.s;
        pos.insert(s, Vec::new());
        allowed.insert(s, vec![Vec::new()]);
        free.insert(s);
        for b in 1..=r.f.len() {
            last_through.insert(r.f[..b].to_vec(), s);
        }
        let fail = |x: u64, m: &str, a: Vec<String>| CheckResult::fail(NAME, s, Some(x), a, m);
        for mv in &r.moves {
            let x = mv.x;
            let (Ok(from), Ok(to)) = (parse_path(&mv.from), parse_path(&mv.to)) else {
                return fail(x, "unparsable path", vec![mv.from.clone(), mv.to.clone()]);
            };
            if !free.contains(&x) {
                return fail(x, "stored or unknown ball moved", vec![mv.to.clone()]);
            }
            if pos[&x] != from {
                return fail(
                    x,
                    "move does not start at the ball's position",
                    vec![path_str(&pos[&x]), mv.from.clone()],
                );
            }
            let ok = match mv.kind {
                MoveKind::Shift => left_of(&r.f, &from) && to == common_prefix(&r.f, &from),
                MoveKind::Down => {
                    to.len() == from.len() + 1
                        && to.starts_with(&from)
                        && prev_f.starts_with(&to)
                        && allowed[&x].contains(&from)
                        && left_stamp(&last_through, &to) < x
                }
                MoveKind::Pull => {
                    !to.is_empty() && r.f.starts_with(&to) && from.starts_with(&to[..to.len() - 1])
                }
            };
            if !ok {
                return fail(
                    x,
                    &format!("illegal {:?} move", mv.kind).to_lowercase(),
                    vec![mv.from.clone(), mv.to.clone(), path_str(&r.f)],
                );
            }
            pos.insert(x, to);
            checked += 1;
        }
        for (x, p) in &r.allowed {
            if let Ok(p) = parse_path(p) {
                allowed.entry(*x).or_default().push(p);
            }
        }
        for &x in &free {
            if left_of(&r.f, &pos[&x]) {
                return fail(
                    x,
                    "ball right of the approximation",
                    vec![path_str(&pos[&x]), path_str(&r.f)],
                );
            }
        }
        for (key, xs) in &r.enumerations {
            if key.starts_with("R@") || key.starts_with("E@") {
                for x in xs {
                    free.remove(x);
                }
            }
        }
        prev_f = r.f.clone();
    }
    CheckResult::pass(NAME, format!("{checked} moves replayed"))
}

/// Once `α`-allowed, a ball never enters `R_α` or `E_α`.
pub fn audit_allowed(trace: &Trace) -> CheckResult {
    const NAME: &str = "allowed";
    if trace.stages.is_empty() {
        return CheckResult::na(NAME, "empty trace");
    }
    let mut allowed: HashMap<u64, HashSet<String>> = HashMap::new();
    for r in &trace.stages {
        for (x, p) in &r.allowed {
            allowed.entry(*x).or_default().insert(p.clone());
        }
        for (key, xs) in &r.enumerations {
            let Some((kind @ ("R" | "E"), None, path)) = split_key(key) else { continue };
            for x in xs {
                if allowed.get(x).is_some_and(|a| a.contains(path)) {
                    return CheckResult::fail(
                        NAME,
                        r.s,
                        Some(*x),
                        vec![format!("{kind}@{path}")],
                        "allowed ball entered a store at the same node",
                    );
                }
            }
        }
    }
    CheckResult::pass(NAME, format!("{} balls allowed somewhere", allowed.len()))
}

fn state_value(s: &str) -> u64 {
    s.chars().fold(0, |acc, c| (acc << 1) | u64::from(c == '1'))
}

/// Within one generation, the e-state of the element marked by `Γ_e` never
/// decreases; generations never go back.
pub fn audit_marker_monotonicity(trace: &Trace) -> CheckResult {
    const NAME: &str = "markers";
    let mut last: HashMap<(usize, String, usize), (u64, u64, u64)> = HashMap::new();
    for r in &trace.stages {
        for m in &r.markers {
            let key = (m.k, m.path.clone(), m.e);
            let v = state_value(&m.state);
            if let Some(&(gen, prev, at)) = last.get(&key) {
                if m.gen < gen || (m.gen == gen && v < prev) {
                    return CheckResult::fail(
                        NAME,
                        r.s,
                        Some(m.x),
                        vec![format!("Γ{}@{}:{}", m.e, m.k, m.path)],
                        format!(
                            "state {} (generation {}) after {prev:b} (generation {gen}, stage {at})",
                            m.state, m.gen
                        ),
                    );
                }
            }
            last.insert(key, (m.gen, v, r.s));
        }
    }
    if last.is_empty() {
        return CheckResult::na(NAME, "no marker records");
    }
    CheckResult::pass(NAME, format!("{} markers tracked", last.len()))
}

/// Every dumped element sits in its `M` and is never marked again.
pub fn audit_dump_permanence(trace: &Trace) -> CheckResult {
    const NAME: &str = "permanence";
    let mut m_sets: HashMap<String, HashSet<u64>> = HashMap::new();
    let mut dumped = 0usize;
    for r in &trace.stages {
        for (key, xs) in &r.enumerations {
            if key.starts_with("M@") {
                let set = m_sets.entry(key.clone()).or_default();
                for &x in xs {
                    if !set.insert(x) {
                        return CheckResult::fail(
                            NAME,
                            r.s,
                            Some(x),
                            vec![key.clone()],
                            "element enumerated into M twice",
                        );
                    }
                }
            }
        }
        for d in &r.dumps {
            for t in &d.targets {
                let Some(x) = t.x else { continue };
                dumped += 1;
                let key = format!("M@{}:{}", d.k, t.path);
                if !m_sets.get(&key).is_some_and(|m| m.contains(&x)) {
                    return CheckResult::fail(
                        NAME,
                        r.s,
                        Some(x),
                        vec![key],
                        "dumped element missing from M",
                    );
                }
            }
        }
        for m in &r.markers {
            let key = format!("M@{}:{}", m.k, m.path);
            if m_sets.get(&key).is_some_and(|s| s.contains(&m.x)) {
                return CheckResult::fail(
                    NAME,
                    r.s,
                    Some(m.x),
                    vec![key, format!("Γ{}", m.e)],
                    "marker on an element of M",
                );
            }
        }
    }
    if dumped == 0 && m_sets.is_empty() {
        return CheckResult::na(NAME, "nothing dumped");
    }
    CheckResult::pass(NAME, format!("{dumped} dumped elements stay in M"))
}

type DumpKey = (usize, u64, usize);

fn homogeneity_core(
    trees: usize,
    compare: bool,
    stages: &[(u64, Vec<&Dump>)],
    trace: &Trace,
) -> CheckResult {
    const NAME: &str = "homogeneity";
    let cfg = &trace.header.config;
    let mut listing = Listing::new();
    let mut total = 0usize;
    for (s, dumps) in stages {
        let mut per_tree: Vec<BTreeMap<DumpKey, usize>> = vec![BTreeMap::new(); trees];
        for d in dumps {
            if d.k >= trees {
                return CheckResult::fail(NAME, *s, None, vec![d.at.clone()], "dump for unknown tree");
            }
            *per_tree[d.k].entry((d.n, d.i, d.p)).or_default() += 1;
            total += 1;
            let Ok(at) = parse_path(&d.at) else {
                return CheckResult::fail(NAME, *s, None, vec![d.at.clone()], "unparsable path");
            };
            let want: Vec<String> =
                dump_target_depths(&mut listing, &cfg.trees[d.k], d.k, at.len(), d.n, d.i)
                    .into_iter()
                    .map(|b| path_str(&at[..b]))
                    .collect();
            let got: Vec<String> = d.targets.iter().map(|t| t.path.clone()).collect();
            if want != got {
                return CheckResult::fail(
                    NAME,
                    *s,
                    None,
                    vec![format!("tree {}", d.k), d.at.clone()],
                    format!("dump ({}, {}, {}) hit {got:?}, expected {want:?}", d.n, d.i, d.p),
                );
            }
        }
        for k in 1..trees {
            if compare && per_tree[k] != per_tree[0] {
                let diff = per_tree[0]
                    .keys()
                    .chain(per_tree[k].keys())
                    .find(|key| per_tree[0].get(*key) != per_tree[k].get(*key))
                    .copied()
                    .expect("maps differ");
                return CheckResult::fail(
                    NAME,
                    *s,
                    None,
                    vec![format!("tree 0"), format!("tree {k}")],
                    format!(
                        "dump (n={}, i={}, p={}) applied {} vs {} times",
                        diff.0,
                        diff.1,
                        diff.2,
                        per_tree[0].get(&diff).unwrap_or(&0),
                        per_tree[k].get(&diff).unwrap_or(&0)
                    ),
                );
            }
        }
    }
    if trees < 2 || !compare {
        return CheckResult::pass(NAME, "single tree: vacuous");
    }
    CheckResult::pass(NAME, format!("{total} dumps synchronized across {trees} trees"))
}

/// Dump decisions agree across trees at every stage and hit exactly the
/// stores their address names.
pub fn audit_homogeneity_trace(trace: &Trace) -> CheckResult {
    let stages: Vec<(u64, Vec<&Dump>)> = trace
        .stages
        .iter()
        .map(|r| (r.s, r.dumps.iter().collect()))
        .collect();
    // a per-tree view carries one tree's dumps only
    let compare = trace.header.tree.is_none();
    homogeneity_core(trace.header.config.trees.len(), compare, &stages, trace)
}

/// The same check over the per-tree views of one run.
pub fn audit_homogeneity(traces: &[Trace]) -> Result<CheckResult> {
    let Some(first) = traces.first() else {
        return Ok(CheckResult::na("homogeneity", "no traces"));
    };
    for t in traces {
        if t.header.run_id != first.header.run_id {
            return Err(Error::Trace(format!(
                "traces from different runs: {} and {}",
                first.header.run_id, t.header.run_id
            )));
        }
        if t.stages.len() != first.stages.len() {
            return Err(Error::Trace("per-tree traces cover different stages".into()));
        }
    }
    let stages: Vec<(u64, Vec<&Dump>)> = (0..first.stages.len())
        .map(|i| {
            (
                first.stages[i].s,
                traces.iter().flat_map(|t| t.stages[i].dumps.iter()).collect(),
            )
        })
        .collect();
    let trees = first.header.config.trees.len();
    Ok(homogeneity_core(trees, true, &stages, first))
}

/// Parts recorded for every element of `M`, destinations honoured, and
/// rotation counts within the part count of each other.
pub fn audit_friedberg(trace: &Trace) -> CheckResult {
    const NAME: &str = "friedberg";
    let cfg = &trace.header.config;
    let hemi = matches!(cfg.mode, Mode::Hemimaximal(_));
    let mut listing = Listing::new();
    let mut layouts: HashMap<(usize, String), Vec<crate::priority::Dest>> = HashMap::new();
    let mut counts: BTreeMap<(usize, String, Side), Vec<usize>> = BTreeMap::new();
    let mut e_sets: HashMap<String, HashSet<u64>> = HashMap::new();
    for r in &trace.stages {
        for (key, xs) in &r.enumerations {
            if let Some(path) = key.strip_prefix("E@") {
                e_sets.entry(path.to_string()).or_default().extend(xs);
            }
        }
        let mut m_new: BTreeSet<(usize, String, u64)> = BTreeSet::new();
        for (key, xs) in &r.enumerations {
            if let Some(("M", Some(k), path)) = split_key(key) {
                m_new.extend(xs.iter().map(|&x| (k, path.to_string(), x)));
            }
        }
        let mut even_new: BTreeSet<(usize, String, u64)> = BTreeSet::new();
        for p in &r.parts {
            let Ok(path) = parse_path(&p.path) else {
                return CheckResult::fail(NAME, r.s, Some(p.x), vec![p.path.clone()], "bad path");
            };
            if p.k >= cfg.trees.len() || path.len() <= p.k {
                return CheckResult::fail(NAME, r.s, Some(p.x), vec![p.path.clone()], "no store");
            }
            let layout = layouts.entry((p.k, p.path.clone())).or_insert_with(|| {
                let (chi, i) = listing.get(path.len() - p.k);
                part_layout(&chi, i, &cfg.trees[p.k], p.k, &mut listing)
            });
            if p.part >= layout.len() {
                return CheckResult::fail(
                    NAME,
                    r.s,
                    Some(p.x),
                    vec![p.path.clone()],
                    format!("part {} of {}", p.part, layout.len()),
                );
            }
            let dest = match &layout[p.part] {
                crate::priority::Dest::D { depth, .. } => {
                    format!("D@{}:{}", p.k, path_str(&path[..*depth]))
                }
                crate::priority::Dest::H => format!("H@{}:{}", p.k, p.path),
            };
            if !r.enumerations.get(&dest).is_some_and(|xs| xs.contains(&p.x)) {
                return CheckResult::fail(
                    NAME,
                    r.s,
                    Some(p.x),
                    vec![p.path.clone(), dest],
                    "part element missing from its destination",
                );
            }
            match p.side {
                Side::Even => {
                    if !even_new.insert((p.k, p.path.clone(), p.x)) {
                        return CheckResult::fail(
                            NAME,
                            r.s,
                            Some(p.x),
                            vec![p.path.clone()],
                            "element given two parts",
                        );
                    }
                }
                Side::Odd => {
                    if !e_sets.get(&p.path).is_some_and(|e| e.contains(&p.x)) {
                        return CheckResult::fail(
                            NAME,
                            r.s,
                            Some(p.x),
                            vec![format!("E@{}", p.path)],
                            "odd part element outside E",
                        );
                    }
                }
            }
            let len = layout.len();
            counts
                .entry((p.k, p.path.clone(), p.side))
                .or_insert_with(|| vec![0; len])[p.part] += 1;
        }
        if let Some((k, path, x)) = m_new.symmetric_difference(&even_new).next() {
            return CheckResult::fail(
                NAME,
                r.s,
                Some(*x),
                vec![format!("M@{k}:{path}")],
                "parts do not partition M",
            );
        }
    }
    if counts.is_empty() {
        return CheckResult::pass(NAME, "no split elements: vacuous");
    }
    let last = trace.stages.last().map_or(0, |r| r.s);
    for ((k, path, side), c) in &counts {
        // in hemimaximal mode part 0 of λ-addresses follows p(H), not the rotation
        let lo = usize::from(hemi && *side == Side::Even && is_lambda_address(&mut listing, *k, path));
        let live = &c[lo..];
        let (min, max) = (live.iter().min().unwrap(), live.iter().max().unwrap());
        if max - min > c.len() {
            return CheckResult::fail(
                NAME,
                last,
                None,
                vec![format!("{side:?}@{k}:{path}").to_lowercase()],
                format!("part counts {c:?} spread more than {}", c.len()),
            );
        }
    }
    CheckResult::pass(NAME, format!("{} split stores balanced", counts.len()))
}

fn is_lambda_address(listing: &mut Listing, k: usize, path: &str) -> bool {
    parse_path(path).is_ok_and(|p| p.len() > k && listing.get(p.len() - k).0.is_empty())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Pattern {
    /// `W ∪ ⊔R ∪ ⊔D =* ω`.
    Cover,
    /// `W ⊆* ⊔R`.
    InsideR,
    /// `W ⊆* ⊔R ⊔ (⊔_{j<i} D − ⊔R)`.
    InsideRDStrict,
    /// The same with `j ≤ i`.
    InsideRDWeak,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Containment {
    pub e: usize,
    pub stage: u64,
    /// Each satisfied pattern with the least `i` witnessing it.
    pub patterns: BTreeMap<Pattern, usize>,
    /// For [`Pattern::Cover`]: the part of the complement of `W_e` covered
    /// by the stores, within the range.
    pub r_we: Vec<u64>,
}

/// Which containment patterns hold for `W_e` at stage `stage`, over balls
/// `1..=stage`, with `=*` and `⊆*` read as "fewer than `threshold`
/// exceptions". The stores are those along `f_stage` (`R` and `E` of each
/// node, `D` of tree 0).
pub fn audit_requirement_containment(
    trace: &Trace,
    e: usize,
    stage: u64,
    threshold: usize,
) -> Result<Containment> {
    let cfg = &trace.header.config;
    let w = cfg
        .enumerators
        .get(e)
        .ok_or_else(|| Error::Config(format!("unknown enumerator {e}")))?
        .build()?;
    let upto: Vec<_> = trace.stages.iter().take_while(|r| r.s <= stage).collect();
    let Some(last) = upto.last() else {
        return Err(Error::Trace(format!("trace does not reach stage {stage}")));
    };
    let f = &last.f;
    let mut r_by: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); f.len() + 1];
    let mut d_by: Vec<BTreeSet<u64>> = vec![BTreeSet::new(); f.len() + 1];
    for r in &upto {
        for (key, xs) in &r.enumerations {
            let Some((kind, k, path)) = split_key(key) else { continue };
            let Ok(p) = parse_path(path) else { continue };
            if p.is_empty() || !f.starts_with(&p) {
                continue;
            }
            match (kind, k) {
                ("R" | "E", None) => r_by[p.len()].extend(xs),
                ("D", Some(0)) => d_by[p.len()].extend(xs),
                _ => {}
            }
        }
    }
    let range: Vec<u64> = (1..=last.s).collect();
    let ws = w.enumerate_upto(last.s);
    let mut patterns = BTreeMap::new();
    let mut r_we = Vec::new();
    let (mut ru, mut du, mut du_prev) = (BTreeSet::new(), BTreeSet::new(), BTreeSet::new());
    for i in 1..=f.len() {
        du_prev.clone_from(&du);
        ru.extend(r_by[i].iter().copied());
        du.extend(d_by[i].iter().copied());
        let miss = |pred: &dyn Fn(u64) -> bool| range.iter().filter(|&&x| !pred(x)).count();
        if miss(&|x| ws.contains(&x) || ru.contains(&x) || du.contains(&x)) < threshold
            && !patterns.contains_key(&Pattern::Cover)
        {
            patterns.insert(Pattern::Cover, i);
            r_we = range
                .iter()
                .copied()
                .filter(|x| !ws.contains(x) && (ru.contains(x) || du.contains(x)))
                .collect();
        }
        let outside = |pred: &dyn Fn(u64) -> bool| {
            range.iter().filter(|&&x| ws.contains(&x) && !pred(x)).count()
        };
        let checks = [
            (Pattern::InsideR, outside(&|x| ru.contains(&x))),
            (
                Pattern::InsideRDStrict,
                outside(&|x| ru.contains(&x) || du_prev.contains(&x)),
            ),
            (
                Pattern::InsideRDWeak,
                outside(&|x| ru.contains(&x) || du.contains(&x)),
            ),
        ];
        for (p, n) in checks {
            if n < threshold {
                patterns.entry(p).or_insert(i);
            }
        }
    }
    Ok(Containment {
        e,
        stage: last.s,
        patterns,
        r_we,
    })
}

/// Informational: reports the patterns each `W_e` meets at the last stage.
/// Never fails; `na` when some `W_e` meets none yet.
pub fn audit_containment_all(trace: &Trace) -> CheckResult {
    const NAME: &str = "containment";
    let Some(last) = trace.stages.last() else {
        return CheckResult::na(NAME, "empty trace");
    };
    let cfg = &trace.header.config;
    let mut lines = Vec::new();
    let mut all = true;
    for e in 0..cfg.enumerators.len() {
        match audit_requirement_containment(trace, e, last.s, cfg.threshold) {
            Ok(c) => {
                all &= !c.patterns.is_empty();
                lines.push(format!("W_{e}: {:?}", c.patterns));
            }
            Err(err) => return CheckResult::na(NAME, err.to_string()),
        }
    }
    if cfg.enumerators.is_empty() {
        return CheckResult::na(NAME, "no enumerators");
    }
    let detail = lines.join("; ");
    if all {
        CheckResult::pass(NAME, detail)
    } else {
        CheckResult::na(NAME, format!("not yet settled: {detail}"))
    }
}

/// Hemimaximal stores: `p(H) ⊔ p(H̆) = p(M)` on the materialized range,
/// `p(M) ⊆ M^k_α` after each visit, part 0 exactly from `p(H)`, and each
/// dump adds one element beyond `p(M)`.
pub fn audit_hemimaximal(trace: &Trace) -> CheckResult {
    const NAME: &str = "hemimaximal";
    let cfg = &trace.header.config;
    let Mode::Hemimaximal(h) = &cfg.mode else {
        return CheckResult::na(NAME, "standard mode");
    };
    let build = |c: &crate::priority::EnumeratorConfig| c.build();
    let (Ok(em), Ok(eh), Ok(ehb)) = (build(&h.m), build(&h.h), build(&h.h_breve)) else {
        return CheckResult::fail(NAME, 0, None, vec![], "hemimaximal inputs do not load");
    };
    let mut listing = Listing::new();
    let mut r_lists: HashMap<String, Vec<u64>> = HashMap::new();
    let mut m_sets: HashMap<String, BTreeSet<u64>> = HashMap::new();
    let mut dumped: HashMap<String, BTreeSet<u64>> = HashMap::new();
    let mut visits = 0usize;
    let mut singles = 0usize;
    for r in &trace.stages {
        let s = r.s;
        for (key, xs) in &r.enumerations {
            if let Some(path) = key.strip_prefix("R@") {
                r_lists.entry(path.to_string()).or_default().extend(xs);
            }
        }
        let mut new_m: HashMap<String, Vec<u64>> = HashMap::new();
        for (key, xs) in &r.enumerations {
            if key.starts_with("M@") {
                m_sets.entry(key.clone()).or_default().extend(xs);
                new_m.insert(key.clone(), xs.clone());
            }
        }
        for d in 1..=r.f.len() {
            let alpha = &r.f[..d];
            let here = path_str(alpha);
            let lambda_trees: Vec<usize> = (0..d.min(cfg.trees.len()))
                .filter(|&k| listing.get(d - k).0.is_empty())
                .collect();
            if lambda_trees.is_empty() {
                continue;
            }
            let rl = r_lists.get(&here).cloned().unwrap_or_default();
            let image = |en: &Enumerator| -> BTreeSet<u64> {
                rl.iter()
                    .enumerate()
                    .filter(|(j, _)| en.contains_at(*j as u64, s))
                    .map(|(_, &y)| y)
                    .collect()
            };
            let (pm, ph, phb) = (image(&em), image(&eh), image(&ehb));
            if let Some(x) = ph.intersection(&phb).next() {
                return CheckResult::fail(NAME, s, Some(*x), vec![here], "p(H) and p(H̆) meet");
            }
            let union: BTreeSet<u64> = ph.union(&phb).copied().collect();
            if union != pm {
                let x = union.symmetric_difference(&pm).next().copied();
                return CheckResult::fail(NAME, s, x, vec![here], "p(H) ⊔ p(H̆) ≠ p(M)");
            }
            for k in lambda_trees {
                visits += 1;
                let key = format!("M@{k}:{here}");
                let m = m_sets.get(&key).cloned().unwrap_or_default();
                if let Some(x) = pm.difference(&m).next() {
                    return CheckResult::fail(NAME, s, Some(*x), vec![key], "p(M) element missing from M");
                }
                let targets: Vec<u64> = r
                    .dumps
                    .iter()
                    .filter(|dp| dp.k == k)
                    .flat_map(|dp| dp.targets.iter())
                    .filter(|t| t.path == here)
                    .filter_map(|t| t.x)
                    .collect();
                let extra: Vec<u64> = new_m
                    .get(&key)
                    .map(|xs| xs.iter().copied().filter(|x| !pm.contains(x)).collect())
                    .unwrap_or_default();
                let mut t_sorted = targets.clone();
                t_sorted.sort_unstable();
                let mut e_sorted = extra.clone();
                e_sorted.sort_unstable();
                if t_sorted != e_sorted {
                    return CheckResult::fail(
                        NAME,
                        s,
                        e_sorted.first().or(t_sorted.first()).copied(),
                        vec![key],
                        format!("dumps {t_sorted:?} but M gained {e_sorted:?} beyond p(M)"),
                    );
                }
                singles += targets.len();
                dumped.entry(key.clone()).or_default().extend(targets);
                for p in r.parts.iter().filter(|p| p.k == k && p.path == here && p.side == Side::Even) {
                    let ok = if p.part == 0 {
                        ph.contains(&p.x)
                    } else {
                        phb.contains(&p.x) || dumped[&key].contains(&p.x)
                    };
                    if !ok {
                        return CheckResult::fail(
                            NAME,
                            s,
                            Some(p.x),
                            vec![key.clone(), format!("part {}", p.part)],
                            "part does not follow the H / H̆ split",
                        );
                    }
                }
            }
        }
    }
    if visits == 0 {
        return CheckResult::na(NAME, "no hemimaximal store visited");
    }
    CheckResult::pass(NAME, format!("{visits} store visits, {singles} single dumps"))
}
