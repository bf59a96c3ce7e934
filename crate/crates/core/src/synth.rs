//! Construction of synchronizing words.
//!
//! For a strongly connected automaton the word is built level by level:
//! pick an almost minimal component `M` of the pair graph, pass to the
//! quotient by the congruence generated by `M`, synchronize the quotient
//! recursively, and then collapse the one congruence class the quotient word
//! lands in. The class is collapsed by repeatedly sending a minimal element of
//! the current image to a maximal element of the class, which removes at
//! least one minimal element per round.
//!
//! For an automaton with a sink component, every other component is first
//! emptied with greedy escape words, processed in topological order, and the
//! sink component is then synchronized as above.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{Dfa, Letter, State, StateSet, Word};
use crate::congruence::{
    check_stability, congruence_from_scc, detect_t_cycle, order_from_scc, quotient, QuotientError,
    StateRelation, TCycle,
};
use crate::monoid::{sinks_of, state_condensation};
use crate::pair_graph::{almost_minimal_in, build_pair_graph, PairGraphError, DEFAULT_PAIR_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("automaton is not strongly connected")]
    NotStronglyConnected,
    #[error("automaton has no sink state, so it has no synchronizing word")]
    NoSink,
    #[error("no almost minimal component in the pair graph at level {level}")]
    NoAlmostMinimalScc { level: usize },
    #[error("t-cycle {cycle} at level {level}: automaton is not aperiodic")]
    TCycle { level: usize, cycle: TCycle },
    #[error("order on the class is not antisymmetric")]
    NotPartialOrder,
    #[error("state set to synchronize is empty")]
    EmptyClass,
    #[error("no word leads from state {from} into the target set")]
    Unreachable { from: State },
    #[error("component is terminal: state {from} cannot leave it")]
    TerminalComponent { from: State },
    #[error("internal invariant violated ({what}): {detail}")]
    Invariant { what: &'static str, detail: String },
    #[error(transparent)]
    PairGraph(#[from] PairGraphError),
    #[error(transparent)]
    Quotient(#[from] QuotientError),
}

fn invariant(what: &'static str, detail: impl Into<String>) -> SynthError {
    SynthError::Invariant {
        what,
        detail: detail.into(),
    }
}

#[derive(Debug, Clone)]
pub struct SynthOptions {
    pub pair_cap: usize,
}

impl Default for SynthOptions {
    fn default() -> Self {
        Self {
            pair_cap: DEFAULT_PAIR_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `n(n-1)/2` for a strongly connected automaton.
    StronglyConnected,
    /// `n(n-1)/2` for an automaton with a sink component.
    General,
    /// No length guarantee applies.
    None,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::StronglyConnected => "strongly_connected",
            BoundKind::General => "general",
            BoundKind::None => "none",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageTag {
    /// Empties a non-sink component of the transition graph.
    Escape,
    /// Collapses one congruence class.
    ClassMerge,
    /// Merges one pair of states (fallback construction).
    PairMerge,
}

impl StageTag {
    pub fn as_str(self) -> &'static str {
        match self {
            StageTag::Escape => "escape",
            StageTag::ClassMerge => "class_merge",
            StageTag::PairMerge => "pair_merge",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stage {
    pub label: String,
    pub word: Word,
    pub tag: StageTag,
    /// Length guarantee for this stage, when one applies.
    pub bound: Option<usize>,
}

/// Record of one class collapse, kept for inspection and re-checking.
#[derive(Debug, Clone)]
pub struct ClassTrace {
    /// Automaton the class lives in (a quotient or sub-automaton of the input).
    pub dfa: Dfa,
    /// Order used for the collapse, already reversed when `reversed` is set.
    pub order: StateRelation,
    pub reversed: bool,
    pub class: StateSet,
    /// Maximal elements of the class under `order`; every round targets them.
    pub max: StateSet,
    pub min: StateSet,
    /// Number of classes of the congruence the class belongs to.
    pub num_classes: usize,
    pub steps: Vec<ClassStep>,
    pub word: Word,
}

#[derive(Debug, Clone)]
pub struct ClassStep {
    pub pivot: State,
    pub subword: Word,
    pub image_before: StateSet,
    pub min_before: StateSet,
    pub image_after: StateSet,
    pub min_after: StateSet,
    pub max_after: StateSet,
}

#[derive(Debug, Clone)]
pub struct SyncCertificate {
    pub word: Word,
    pub n: usize,
    pub bound_kind: BoundKind,
    pub bound: Option<usize>,
    pub stages: Vec<Stage>,
    pub verified: bool,
    /// Outcome of `|word| <= bound`, `None` without a bound.
    pub bound_ok: Option<bool>,
    /// Letters removed by the trimming pass.
    pub trimmed: usize,
    pub class_traces: Vec<ClassTrace>,
}

impl SyncCertificate {
    fn seal(dfa: &Dfa, word: Word, bound_kind: BoundKind, stages: Vec<Stage>, class_traces: Vec<ClassTrace>) -> Self {
        let n = dfa.num_states();
        let bound = match bound_kind {
            BoundKind::None => None,
            _ => Some(n * (n - 1) / 2),
        };
        let mut cert = SyncCertificate {
            verified: false,
            bound_ok: None,
            word,
            n,
            bound_kind,
            bound,
            stages,
            trimmed: 0,
            class_traces,
        };
        if let Some(b) = bound {
            if cert.word.len() > b {
                cert.trim(dfa);
            }
        }
        cert.verified = dfa.is_synchronizing_word(&cert.word);
        cert.bound_ok = bound.map(|b| cert.word.len() <= b);
        cert
    }

    /// Drops leading, then trailing, letters while the word still
    /// synchronizes, keeping the stage decomposition in step.
    fn trim(&mut self, dfa: &Dfa) {
        if !dfa.is_synchronizing_word(&self.word) {
            return;
        }
        let letters = self.word.letters().to_vec();
        let mut lo = 0;
        while lo < letters.len() && dfa.is_synchronizing_word(&Word::from(letters[lo + 1..].to_vec())) {
            lo += 1;
        }
        let mut hi = letters.len();
        while hi > lo && dfa.is_synchronizing_word(&Word::from(letters[lo..hi - 1].to_vec())) {
            hi -= 1;
        }
        if lo == 0 && hi == letters.len() {
            return;
        }
        let mut offset = 0;
        for stage in &mut self.stages {
            let len = stage.word.len();
            let (start, end) = (lo.clamp(offset, offset + len), hi.clamp(offset, offset + len));
            stage.word = Word::from(stage.word.letters()[start - offset..end - offset].to_vec());
            offset += len;
        }
        self.trimmed = letters.len() - (hi - lo);
        self.word = Word::from(letters[lo..hi].to_vec());
    }

    /// Key-value serialization, one field per line.
    pub fn to_key_values(&self, k: usize) -> String {
        let mut out = String::new();
        let opt = |v: Option<usize>| v.map_or("none".to_string(), |b| b.to_string());
        writeln!(out, "word={}", self.word.render(k)).unwrap();
        writeln!(out, "length={}", self.word.len()).unwrap();
        writeln!(out, "states={}", self.n).unwrap();
        writeln!(out, "bound_kind={}", self.bound_kind.as_str()).unwrap();
        writeln!(out, "bound={}", opt(self.bound)).unwrap();
        let ok = self.bound_ok.map_or("skipped".to_string(), |b| b.to_string());
        writeln!(out, "bound_ok={ok}").unwrap();
        writeln!(out, "verified={}", self.verified).unwrap();
        writeln!(out, "trimmed={}", self.trimmed).unwrap();
        writeln!(out, "stages={}", self.stages.len()).unwrap();
        for (i, s) in self.stages.iter().enumerate() {
            writeln!(out, "stage.{i}.tag={}", s.tag.as_str()).unwrap();
            writeln!(out, "stage.{i}.word={}", s.word.render(k)).unwrap();
            writeln!(out, "stage.{i}.length={}", s.word.len()).unwrap();
            writeln!(out, "stage.{i}.bound={}", opt(s.bound)).unwrap();
            writeln!(out, "stage.{i}.label={}", s.label).unwrap();
        }
        out
    }
}

/// Shortest, then lexicographically least, word leading from `from` to a
/// state satisfying `target`. Returns the empty word if `from` already does.
pub fn shortest_path_to<F>(dfa: &Dfa, from: State, target: F) -> Option<Word>
where
    F: Fn(State) -> bool,
{
    if target(from) {
        return Some(Word::empty());
    }
    let n = dfa.num_states();
    let mut parent: Vec<Option<(State, Letter)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(q) = queue.pop_front() {
        for a in dfa.letters() {
            let t = dfa.step(q, a);
            if seen[t] {
                continue;
            }
            seen[t] = true;
            parent[t] = Some((q, a));
            if target(t) {
                let mut letters = Vec::new();
                let mut cur = t;
                while let Some((p, a)) = parent[cur] {
                    letters.push(a);
                    cur = p;
                }
                letters.reverse();
                return Some(Word::from(letters));
            }
            queue.push_back(t);
        }
    }
    None
}

/// A word collapsing `class` to one state; see [`synchronize_class_traced`].
pub fn synchronize_class(dfa: &Dfa, order: &StateRelation, class: &StateSet) -> Result<Word, SynthError> {
    Ok(synchronize_class_traced(dfa, order, class, 1)?.word)
}

/// Collapses `class`, a class of the congruence generated by the order, to a
/// single state.
///
/// Each round picks the smallest minimal element of the current image and
/// appends a shortest word sending it into the maximal elements of the
/// original class. The orientation is chosen so that there are at least as
/// many maximal as minimal elements. Every round re-checks that minimal and
/// maximal elements of the image stay disjoint, that minimal elements only
/// come from images of minimal elements, that their number strictly drops,
/// and that the appended word is shorter than the number of states; a
/// failure is reported as [`SynthError::Invariant`].
pub fn synchronize_class_traced(
    dfa: &Dfa,
    order: &StateRelation,
    class: &StateSet,
    num_classes: usize,
) -> Result<ClassTrace, SynthError> {
    if class.is_empty() {
        return Err(SynthError::EmptyClass);
    }
    if !order.is_antisymmetric() {
        return Err(SynthError::NotPartialOrder);
    }
    let n = dfa.num_states();
    let mut order = order.clone();
    let mut max = order.maximal_in(class);
    let mut min = order.minimal_in(class);
    let reversed = max.len() < min.len();
    if reversed {
        order = order.reversed();
        std::mem::swap(&mut max, &mut min);
    }

    let mut trace = ClassTrace {
        dfa: dfa.clone(),
        order,
        reversed,
        class: class.clone(),
        max,
        min,
        num_classes,
        steps: Vec::new(),
        word: Word::empty(),
    };
    let order = &trace.order;
    let mut image = class.clone();
    let mut min_t = trace.min.clone();
    if image.len() > 1 && !min_t.intersection(&order.maximal_in(&image)).is_empty() {
        return Err(invariant("disjoint extremes", format!("class {class:?}")));
    }
    while image.len() > 1 {
        let pivot = min_t.first().expect("nonempty image has a minimal element");
        let subword = shortest_path_to(dfa, pivot, |s| trace.max.contains(s))
            .ok_or(SynthError::Unreachable { from: pivot })?;
        let image_after = dfa.apply_set(&image, &subword).expect("image is nonempty");
        let min_after = order.minimal_in(&image_after);
        let max_after = order.maximal_in(&image_after);

        if image_after.len() > 1 && !min_after.intersection(&max_after).is_empty() {
            return Err(invariant(
                "disjoint extremes",
                format!("image {image_after:?} has minimal {min_after:?} and maximal {max_after:?}"),
            ));
        }
        let carried = dfa.apply_set(&min_t, &subword).expect("minimal set is nonempty");
        if !min_after.is_subset(&carried) {
            return Err(invariant(
                "minimal elements come from minimal elements",
                format!("{min_after:?} is not inside {carried:?}"),
            ));
        }
        if image_after.len() > 1 && min_after.len() >= min_t.len() {
            return Err(invariant(
                "minimal elements decrease",
                format!("{} minimal elements before, {} after", min_t.len(), min_after.len()),
            ));
        }
        if subword.is_empty() || subword.len() > n - 1 {
            return Err(invariant(
                "round length",
                format!("round word of length {} with {n} states", subword.len()),
            ));
        }

        trace.word.extend(&subword);
        trace.steps.push(ClassStep {
            pivot,
            subword,
            image_before: image,
            min_before: min_t,
            image_after: image_after.clone(),
            min_after: min_after.clone(),
            max_after,
        });
        image = image_after;
        min_t = min_after;
    }
    Ok(trace)
}

fn sc_level(
    dfa: &Dfa,
    level: usize,
    opts: &SynthOptions,
    stages: &mut Vec<Stage>,
    traces: &mut Vec<ClassTrace>,
) -> Result<Word, SynthError> {
    let n = dfa.num_states();
    if n == 1 {
        return Ok(Word::empty());
    }
    let graph = build_pair_graph(dfa, opts.pair_cap)?;
    let cond = graph.condensation();
    let m = almost_minimal_in(&graph, &cond).ok_or(SynthError::NoAlmostMinimalScc { level })?;
    if let Some(cycle) = detect_t_cycle(dfa, &m) {
        return Err(SynthError::TCycle { level, cycle });
    }
    let order = order_from_scc(dfa, &m);
    let part = congruence_from_scc(dfa, &m);
    let r = part.num_blocks();
    if r >= n {
        return Err(invariant("nontrivial congruence", format!("{r} classes on {n} states")));
    }
    if let Err(v) = check_stability(dfa, &order) {
        return Err(invariant("stable order", format!("{v:?}")));
    }
    let (quot, _) = quotient(dfa, &part)?;
    let u = sc_level(&quot, level + 1, opts, stages, traces)?;
    let block = quot.apply(0, &u);
    let class = part.block(block).clone();
    let trace = synchronize_class_traced(dfa, &order, &class, r)?;
    let v = trace.word.clone();
    stages.push(Stage {
        label: format!(
            "level {level}: collapse a class of {} states ({r} classes on {n} states)",
            class.len()
        ),
        word: v.clone(),
        tag: StageTag::ClassMerge,
        bound: Some((n - r + 1) * (n - 1) / 2),
    });
    traces.push(trace);
    Ok(u.concat(&v))
}

/// Synchronizing word for a strongly connected automaton.
///
/// Aperiodicity is not checked up front: a cycle in the order at any level is
/// reported as [`SynthError::TCycle`].
pub fn synchronize_strongly_connected(dfa: &Dfa, opts: &SynthOptions) -> Result<SyncCertificate, SynthError> {
    if state_condensation(dfa).len() != 1 {
        return Err(SynthError::NotStronglyConnected);
    }
    let mut stages = Vec::new();
    let mut traces = Vec::new();
    let word = sc_level(dfa, 0, opts, &mut stages, &mut traces)?;
    Ok(SyncCertificate::seal(dfa, word, BoundKind::StronglyConnected, stages, traces))
}

/// A word moving every state of `component` outside of it.
pub fn escape_word(dfa: &Dfa, component: &StateSet) -> Result<Word, SynthError> {
    escape_tracked(dfa, component, component)
}

/// Greedy escape for the states `tracked`: while some image is still in
/// `component`, append the shortest word taking one of them out, preferring
/// the smallest state among equally short candidates.
pub fn escape_tracked(dfa: &Dfa, component: &StateSet, tracked: &StateSet) -> Result<Word, SynthError> {
    let mut images = tracked.clone();
    let mut word = Word::empty();
    loop {
        let inside = images.intersection(component);
        if inside.is_empty() {
            return Ok(word);
        }
        let mut best: Option<Word> = None;
        for x in inside.iter() {
            let path = shortest_path_to(dfa, x, |s| !component.contains(s))
                .ok_or(SynthError::TerminalComponent { from: x })?;
            if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                best = Some(path);
            }
        }
        let path = best.expect("inside is nonempty");
        let outside = images.difference(component);
        let next = dfa.apply_set(&images, &path).expect("nonempty");
        if !outside.is_empty() && !dfa.apply_set(&outside, &path).unwrap().intersection(component).is_empty() {
            return Err(invariant("monotone escape", format!("re-entered {component:?}")));
        }
        word.extend(&path);
        images = next;
    }
}

/// Synchronizing word for an automaton with a sink component.
pub fn synchronize_aperiodic(dfa: &Dfa, opts: &SynthOptions) -> Result<SyncCertificate, SynthError> {
    let cond = state_condensation(dfa);
    let sinks = sinks_of(&cond);
    if sinks.is_empty() {
        return Err(SynthError::NoSink);
    }
    if cond.len() == 1 {
        return synchronize_strongly_connected(dfa, opts);
    }
    let sink_component = cond.component_of(sinks.first().unwrap());
    let order = cond.topological_order();
    let mut rank = vec![0; cond.len()];
    for (i, &c) in order.iter().enumerate() {
        rank[c] = i;
    }

    let mut images: Vec<State> = dfa.states().collect();
    let mut stages = Vec::new();
    let mut word = Word::empty();
    for &c in &order {
        if c == sink_component {
            continue;
        }
        let component: StateSet = cond.component(c).iter().copied().collect();
        let tracked: StateSet = images.iter().copied().filter(|&q| component.contains(q)).collect();
        if tracked.is_empty() {
            continue;
        }
        let w = escape_tracked(dfa, &component, &tracked)?;
        for img in &mut images {
            let next = dfa.apply(*img, &w);
            if rank[cond.component_of(next)] < rank[cond.component_of(*img)] {
                return Err(invariant("monotone escape", format!("{} moved back to {}", img, next)));
            }
            *img = next;
        }
        let r_i = component.len();
        stages.push(Stage {
            label: format!("escape component {c} ({r_i} states, {} tracked)", tracked.len()),
            word: w.clone(),
            tag: StageTag::Escape,
            bound: Some(r_i * (r_i + 1) / 2),
        });
        word.extend(&w);
    }
    if let Some(&q) = images.iter().find(|&&q| !sinks.contains(q)) {
        return Err(invariant("escape into sinks", format!("image {q} outside the sink component")));
    }

    let (sub, _) = dfa.restrict(&sinks).expect("sink component is closed");
    let inner = synchronize_strongly_connected(&sub, opts)?;
    for mut s in inner.stages {
        s.label = format!("sink component: {}", s.label);
        stages.push(s);
    }
    word.extend(&inner.word);
    Ok(SyncCertificate::seal(dfa, word, BoundKind::General, stages, inner.class_traces))
}

/// Greedy pair merging: repeatedly merge the pair of current images with the
/// shortest merging word. No length guarantee; `None` if some pair cannot be
/// merged.
pub fn greedy_merge(dfa: &Dfa, opts: &SynthOptions) -> Result<Option<SyncCertificate>, SynthError> {
    let graph = build_pair_graph(dfa, opts.pair_cap)?;
    let n = dfa.num_states();
    let nv = graph.num_vertices();
    // distance of each pair to the diagonal, by reverse breadth-first search
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for v in 0..nv {
        for a in dfa.letters() {
            preds[graph.successor(v, a)].push(v);
        }
    }
    let mut dist = vec![usize::MAX; nv];
    let mut queue: VecDeque<usize> = (0..n).map(|q| graph.vertex(q, q)).collect();
    for &v in &queue {
        dist[v] = 0;
    }
    while let Some(v) = queue.pop_front() {
        for &u in &preds[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    drop(preds);

    let mut images = StateSet::full(n);
    let mut word = Word::empty();
    let mut stages = Vec::new();
    while images.len() > 1 {
        let mut best: Option<(usize, State, State)> = None;
        let states: Vec<State> = images.iter().collect();
        for (i, &p) in states.iter().enumerate() {
            for &q in &states[i + 1..] {
                let d = dist[graph.vertex(p, q)];
                if d != usize::MAX && best.is_none_or(|b| d < b.0) {
                    best = Some((d, p, q));
                }
            }
        }
        let Some((d, p, q)) = best else {
            return Ok(None);
        };
        let mut w = Word::empty();
        let mut v = graph.vertex(p, q);
        while !graph.is_diagonal(v) {
            let a = dfa
                .letters()
                .find(|&a| dist[graph.successor(v, a)] + 1 == dist[v])
                .expect("distance decreases along some letter");
            w.push(a);
            v = graph.successor(v, a);
        }
        debug_assert_eq!(w.len(), d);
        images = dfa.apply_set(&images, &w).expect("nonempty");
        stages.push(Stage {
            label: format!("merge states {p} and {q}"),
            word: w.clone(),
            tag: StageTag::PairMerge,
            bound: None,
        });
        word.extend(&w);
    }
    Ok(Some(SyncCertificate::seal(dfa, word, BoundKind::None, stages, Vec::new())))
}

/// Independent re-check of a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub synchronizes: bool,
    pub image_size: usize,
    pub length: usize,
    pub bound_kind: BoundKind,
    pub bound: Option<usize>,
    /// `None` when no bound applies and the check was skipped.
    pub bound_ok: Option<bool>,
    pub stages_consistent: bool,
}

impl Report {
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        writeln!(out, "synchronizes={}", self.synchronizes).unwrap();
        writeln!(out, "image_size={}", self.image_size).unwrap();
        writeln!(out, "length={}", self.length).unwrap();
        writeln!(out, "bound_kind={}", self.bound_kind.as_str()).unwrap();
        writeln!(out, "bound={}", self.bound.map_or("none".into(), |b| b.to_string())).unwrap();
        let ok = self.bound_ok.map_or("skipped".to_string(), |b| b.to_string());
        writeln!(out, "bound_ok={ok}").unwrap();
        writeln!(out, "stages_consistent={}", self.stages_consistent).unwrap();
        out
    }
}

pub fn certify(dfa: &Dfa, cert: &SyncCertificate) -> Report {
    let image_size = if dfa.check_word(&cert.word).is_ok() {
        dfa.apply_set(&StateSet::full(dfa.num_states()), &cert.word)
            .map_or(0, |s| s.len())
    } else {
        0
    };
    let n = dfa.num_states();
    let bound = match cert.bound_kind {
        BoundKind::None => None,
        _ => Some(n * (n - 1) / 2),
    };
    let concatenated: Word = cert.stages.iter().flat_map(|s| s.word.iter().collect::<Vec<_>>()).collect();
    Report {
        synchronizes: image_size == 1,
        image_size,
        length: cert.word.len(),
        bound_kind: cert.bound_kind,
        bound,
        bound_ok: bound.map(|b| cert.word.len() <= b),
        stages_consistent: concatenated == cert.word,
    }
}
