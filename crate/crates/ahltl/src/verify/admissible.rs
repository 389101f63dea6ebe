//! Admissible formulas: every trace is universal with one existential
//! stuttering, and the body combines position-0 state formulas with one
//! invariant requiring equal colors on trace pairs. A canonical strategy that
//! advances as many stutterings as it safely can decides such formulas at
//! window bound 1.

use std::collections::{HashMap, HashSet, VecDeque};

use indexmap::IndexSet;

use super::{Outcome, Pipeline, Reason, Timings, Verdict, VerifyOptions};
use crate::automata::{ltl_lasso_eval, LassoWord};
use crate::error::{Error, Result};
use crate::game::{BuildStats, GameContext, GameVertex, Position, Stage};
use crate::graph;
use crate::spec::{classify_fragment, compile_atoms, AdmissibleInfo, AhltlFormula, CompletenessTag, Skeleton};
use crate::ts::{StateId, TransitionSystem, Value};

/// Label slots of the color variables of each trace pair, resolved per system.
struct Colors {
    /// `(i, j, slots in system i, slots in system j)`
    pairs: Vec<(usize, usize, Vec<usize>, Vec<usize>)>,
}

impl Colors {
    fn new(info: &AdmissibleInfo, systems: &[&TransitionSystem]) -> Result<Colors> {
        let slot = |k: usize, v: &str| {
            systems[k]
                .var_index(v)
                .ok_or_else(|| Error::Semantic(format!("variable `{v}` is not declared in `{}`", systems[k].name())))
        };
        let mut pairs = Vec::new();
        for c in info.color_sets.iter().filter(|c| !c.vars.is_empty()) {
            let a = c.vars.iter().map(|v| slot(c.i, v)).collect::<Result<Vec<_>>>()?;
            let b = c.vars.iter().map(|v| slot(c.j, v)).collect::<Result<Vec<_>>>()?;
            pairs.push((c.i, c.j, a, b));
        }
        Ok(Colors { pairs })
    }

    /// All pairwise colors agree when trace `k` sits in state `at[k]`.
    fn agree(&self, systems: &[&TransitionSystem], at: &[StateId]) -> bool {
        self.pairs.iter().all(|(i, j, a, b)| {
            let (li, lj) = (systems[*i].label(at[*i]), systems[*j].label(at[*j]));
            a.iter().zip(b).all(|(&x, &y)| li[x] == lj[y])
        })
    }
}

/// The maximal safe progress set at an existential vertex of the window-1
/// game, as a bitmask over trace indices.
///
/// A progress set is safe when the states reached by advancing exactly its
/// members keep every pairwise color equal. Safe sets are closed under union,
/// so the union of all of them is the maximum.
pub fn sigma_max_step(ctx: &GameContext, info: &AdmissibleInfo, v: &Position) -> Result<u32> {
    let colors = Colors::new(info, ctx.systems())?;
    step_with(ctx, &colors, v)
}

fn step_with(ctx: &GameContext, colors: &Colors, v: &Position) -> Result<u32> {
    let n = v.windows.len();
    if n > 16 {
        return Err(Error::Unsupported("progress sets over more than 16 traces".into()));
    }
    if v.stage != Stage::Exists || v.windows.iter().any(|w| w.len() != 2) || v.pointers.iter().any(|&p| p != 0) {
        return Err(Error::Unsupported("progress sets are defined on existential vertices of the window-1 game".into()));
    }
    let systems = ctx.systems();
    let now: Vec<StateId> = v.windows.iter().map(|w| w[0]).collect();
    if !colors.agree(systems, &now) {
        return Err(Error::AssumptionViolated);
    }
    let next = |m: u32| -> Vec<StateId> { (0..n).map(|i| v.windows[i][(m >> i & 1) as usize]).collect() };
    let safe = |m: u32| colors.agree(systems, &next(m));
    // Both traces may have to move together onto a new color, so singletons
    // alone do not generate every safe set.
    let union = (0..1u32 << n).filter(|&m| safe(m)).fold(0u32, |a, m| a | m);
    if !safe(union) {
        return Err(Error::AssumptionViolated);
    }
    Ok(union)
}

/// Maps a trace mask to the mask of their (single) stutterings.
fn stutter_mask(f: &AhltlFormula, traces: u32) -> u32 {
    let mut m = 0;
    for (j, s) in f.stutters.iter().enumerate() {
        if traces >> s.base & 1 == 1 {
            m |= 1 << j;
        }
    }
    m
}

/// Values of the skeleton's state formulas are fixed by the initial states.
fn skeleton_at_init(ctx: &GameContext, skel: &Skeleton) -> (bool, bool) {
    let init = ctx.initial_vertices();
    let p = init[0].position().expect("initial vertex");
    let letter = ctx.letter(p);
    let n_atoms = ctx.formula().atoms.len();
    let word = LassoWord::new(vec![], vec![letter]);
    let mut eval = |l: &crate::spec::Ltl| ltl_lasso_eval(l, n_atoms, &word);
    (skel.eval(&mut eval, false), skel.eval(&mut eval, true))
}

/// Decides an admissible formula by exploring only the game restricted to the
/// canonical verifier strategy at window bound 1.
pub fn verify_admissible_fast(systems: &[&TransitionSystem], f: &AhltlFormula, opts: &VerifyOptions) -> Result<Verdict> {
    let report = classify_fragment(f, systems);
    let (Some(info), Some(inv)) = (report.admissible.as_ref(), report.invariant.as_ref()) else {
        return Err(Error::NotAdmissible);
    };
    let pipeline = Pipeline::new(systems, f, opts)?;
    let start = std::time::Instant::now();
    let ctx = pipeline.context(1)?;
    let colors = Colors::new(info, ctx.systems())?;
    let (without, _) = skeleton_at_init(&ctx, &inv.skeleton);
    let all = ctx.exists_mask();

    let mut vertices: IndexSet<GameVertex> = IndexSet::new();
    let mut succ: Vec<Vec<u32>> = Vec::new();
    for v in ctx.initial_vertices() {
        vertices.insert(v);
    }
    let initials = vertices.len();
    let mut k = 0;
    while k < vertices.len() {
        let v = vertices[k].clone();
        let next = match &v {
            GameVertex::Play(p) if p.stage == Stage::Exists => {
                let sched = if without {
                    all
                } else {
                    match step_with(&ctx, &colors, p) {
                        Ok(m) => stutter_mask(f, m),
                        Err(Error::AssumptionViolated) => all,
                        Err(e) => return Err(e),
                    }
                };
                vec![ctx.apply_move(p, &[], sched).expect("legal progress set")]
            }
            _ => ctx.successors(&v),
        };
        let ids = next.into_iter().map(|t| vertices.insert_full(t).0 as u32).collect();
        if vertices.len() > opts.build.max_vertices {
            return Err(Error::CapacityExceeded {
                phase: "game",
                what: "vertices",
                limit: opts.build.max_vertices,
            });
        }
        succ.push(ids);
        k += 1;
    }
    let construct = start.elapsed().as_secs_f64();
    let t = std::time::Instant::now();
    let prio: Vec<u32> = vertices.iter().map(|v| ctx.priority(v)).collect();
    let won = !odd_cycle(&prio, &succ);
    let solve = t.elapsed().as_secs_f64();

    let (outcome, reason) = if won {
        (Outcome::Verified, Reason::WinFromAllInitials)
    } else {
        (Outcome::Violated, Reason::LossInCompleteFragment { fragment: CompletenessTag::Admissible, z: 1 })
    };
    let b = BuildStats {
        vertices: vertices.len(),
        edges: succ.iter().map(Vec::len).sum(),
        initials,
        priorities: prio.iter().collect::<HashSet<_>>().len(),
        error_reachable: vertices.contains(&GameVertex::Error),
    };
    Ok(Verdict {
        outcome,
        reason,
        z: 1,
        fragment: report.clone(),
        stats: pipeline.stats(&b, if won { initials } else { 0 }),
        timings: Timings {
            automaton: pipeline.automaton_time,
            construct,
            solve,
            total: pipeline.automaton_time + construct + solve,
        },
    })
}

/// Some cycle of the one-player graph has odd least priority.
fn odd_cycle(prio: &[u32], succ: &[Vec<u32>]) -> bool {
    let n = prio.len();
    let mut odd: Vec<u32> = prio.iter().copied().filter(|p| p % 2 == 1).collect();
    odd.sort_unstable();
    odd.dedup();
    odd.into_iter().any(|p| {
        let roots: Vec<usize> = (0..n).filter(|&v| prio[v] == p).collect();
        let sccs = graph::sccs(n, roots.iter().copied(), |v| {
            succ[v].iter().map(|&t| t as usize).filter(|&t| prio[t] >= p).collect::<Vec<_>>()
        });
        roots.iter().any(|&v| sccs.on_cycle(v))
    })
}

/// Exact semantic decision for admissible formulas over at most two traces.
///
/// The state formulas are fixed by the initial states. When the invariant
/// matters, the formula holds iff no pair of paths has different destuttered
/// color words, which a search over pairs of color-block boundaries decides.
pub fn oracle_check_admissible(systems: &[&TransitionSystem], f: &AhltlFormula) -> Result<bool> {
    let report = classify_fragment(f, systems);
    let (Some(info), Some(inv)) = (report.admissible.as_ref(), report.invariant.as_ref()) else {
        return Err(Error::NotAdmissible);
    };
    let atoms = compile_atoms(f, systems)?;
    let labels: Vec<&[Value]> = f.stutters.iter().map(|s| systems[s.base].label(systems[s.base].init())).collect();
    let mut letter = 0u32;
    for (a, atom) in atoms.iter().enumerate() {
        if atom.eval(&labels) {
            letter |= 1 << a;
        }
    }
    let word = LassoWord::new(vec![], vec![letter]);
    let mut eval = |l: &crate::spec::Ltl| ltl_lasso_eval(l, atoms.len(), &word);
    if inv.skeleton.eval(&mut eval, false) {
        return Ok(true);
    }
    if !inv.skeleton.eval(&mut eval, true) {
        return Ok(false);
    }
    match f.traces.len() {
        0 | 1 => Ok(true),
        2 => {
            let colors = Colors::new(info, systems)?;
            Ok(match colors.pairs.first() {
                None => true,
                Some((_, _, a, b)) => !colors_can_diverge(systems[0], a, systems[1], b),
            })
        }
        n => Err(Error::Unsupported(format!("the exact oracle handles two traces, got {n}"))),
    }
}

struct Blocks<'a> {
    ts: &'a TransitionSystem,
    slots: &'a [usize],
    cache: HashMap<StateId, (bool, Vec<StateId>)>,
}

impl<'a> Blocks<'a> {
    fn color(&self, s: StateId) -> Vec<Value> {
        let l = self.ts.label(s);
        self.slots.iter().map(|&k| l[k]).collect()
    }

    /// Whether a path from `s` can keep its color forever, and the states
    /// of another color by which it can leave.
    fn of(&mut self, s: StateId) -> (bool, Vec<StateId>) {
        if let Some(r) = self.cache.get(&s) {
            return r.clone();
        }
        let c = self.color(s);
        let n = self.ts.num_states();
        let inside = |t: StateId| self.color(t) == c;
        let sccs = graph::sccs(n, [s as usize], |u| {
            self.ts.succ(u as StateId).iter().filter(|&&t| inside(t)).map(|&t| t as usize).collect::<Vec<_>>()
        });
        let stay = (0..n).any(|u| sccs.reached(u) && sccs.on_cycle(u));
        let mut exits: Vec<StateId> = (0..n)
            .filter(|&u| sccs.reached(u))
            .flat_map(|u| self.ts.succ(u as StateId).iter().copied().filter(|&t| !inside(t)))
            .collect();
        exits.sort_unstable();
        exits.dedup();
        self.cache.insert(s, (stay, exits.clone()));
        (stay, exits)
    }
}

fn colors_can_diverge(t1: &TransitionSystem, a: &[usize], t2: &TransitionSystem, b: &[usize]) -> bool {
    let mut x = Blocks { ts: t1, slots: a, cache: HashMap::new() };
    let mut y = Blocks { ts: t2, slots: b, cache: HashMap::new() };
    let start = (t1.init(), t2.init());
    if x.color(start.0) != y.color(start.1) {
        return true;
    }
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some((s, t)) = queue.pop_front() {
        let (stay_s, exit_s) = x.of(s);
        let (stay_t, exit_t) = y.of(t);
        if (stay_s && !exit_t.is_empty()) || (stay_t && !exit_s.is_empty()) {
            return true;
        }
        for &s2 in &exit_s {
            for &t2 in &exit_t {
                if x.color(s2) != y.color(t2) {
                    return true;
                }
                if seen.insert((s2, t2)) {
                    queue.push_back((s2, t2));
                }
            }
        }
    }
    false
}
