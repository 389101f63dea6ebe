//! The trajectory dialect: `Etau t.` / `Atau t.` and atoms `x@p:t`.
//!
//! Each trace/trajectory pair used in the body becomes its own stuttering of the trace.

use std::collections::HashSet;

use super::parse::{parse_surface, resolve, Dialect, PrefixItem, Surf};
use super::print::render_ltl;
use super::{AhltlFormula, Quant};
use crate::error::{Error, Result};

pub fn from_trajectory_form(text: &str) -> Result<AhltlFormula> {
    let surf = parse_surface(text, Dialect::Trajectory)?;
    let mut traces: Vec<(Quant, String)> = Vec::new();
    let mut trajs: Vec<(Quant, String)> = Vec::new();
    let mut names = HashSet::new();
    for item in &surf.prefix {
        match item {
            PrefixItem::Trace { quant, name } => {
                if !trajs.is_empty() {
                    return Err(Error::Binding(format!(
                        "trace `{name}` is quantified after a trajectory quantifier"
                    )));
                }
                if !names.insert(name.clone()) {
                    return Err(Error::Binding(format!("`{name}` is quantified twice")));
                }
                traces.push((*quant, name.clone()));
            }
            PrefixItem::Traj { quant, name, .. } => {
                if !names.insert(name.clone()) {
                    return Err(Error::Binding(format!("`{name}` is quantified twice")));
                }
                trajs.push((*quant, name.clone()));
            }
            PrefixItem::Stutter { .. } => unreachable!("rejected by the trajectory dialect"),
        }
    }
    let mut used: HashSet<(usize, usize)> = HashSet::new();
    collect_pairs(&surf.body, &traces, &trajs, &mut used)?;

    let mut items: Vec<PrefixItem> = traces
        .iter()
        .map(|(quant, name)| PrefixItem::Trace { quant: *quant, name: name.clone() })
        .collect();
    let mut fresh: Vec<Vec<Option<String>>> = vec![vec![None; trajs.len()]; traces.len()];
    for (k, (quant, tname)) in trajs.iter().enumerate() {
        for (i, (_, pname)) in traces.iter().enumerate() {
            if !used.contains(&(i, k)) {
                continue;
            }
            let mut name = format!("{pname}_{tname}");
            while names.contains(&name) {
                name.push('\'');
            }
            names.insert(name.clone());
            items.push(PrefixItem::Stutter {
                quant: *quant,
                name: name.clone(),
                base: pname.clone(),
                line: 0,
                col: 0,
            });
            fresh[i][k] = Some(name);
        }
    }
    let body = rename(&surf.body, &traces, &trajs, &fresh);
    resolve(&items, &body)
}

fn lookup(names: &[(Quant, String)], n: &str) -> Option<usize> {
    names.iter().position(|(_, m)| m == n)
}

fn collect_pairs(
    s: &Surf,
    traces: &[(Quant, String)],
    trajs: &[(Quant, String)],
    used: &mut HashSet<(usize, usize)>,
) -> Result<()> {
    match s {
        Surf::Bool(_) | Surf::Int(_) => Ok(()),
        Surf::Var { var, index, traj, line, col } => {
            let Some(i) = lookup(traces, index) else {
                return Err(Error::Binding(format!("unbound trace `{index}` in `{var}@{index}` at {line}:{col}")));
            };
            let Some(t) = traj else {
                return Err(Error::Binding(format!(
                    "`{var}@{index}` at {line}:{col} needs a trajectory index `:t`"
                )));
            };
            let Some(k) = lookup(trajs, t) else {
                return Err(Error::Binding(format!("unbound trajectory `{t}` at {line}:{col}")));
            };
            used.insert((i, k));
            Ok(())
        }
        Surf::Un(_, a) => collect_pairs(a, traces, trajs, used),
        Surf::Bin(_, a, b) => {
            collect_pairs(a, traces, trajs, used)?;
            collect_pairs(b, traces, trajs, used)
        }
    }
}

fn rename(s: &Surf, traces: &[(Quant, String)], trajs: &[(Quant, String)], fresh: &[Vec<Option<String>>]) -> Surf {
    match s {
        Surf::Var { var, index, traj, line, col } => {
            let i = lookup(traces, index).unwrap();
            let k = lookup(trajs, traj.as_deref().unwrap()).unwrap();
            Surf::Var {
                var: var.clone(),
                index: fresh[i][k].clone().unwrap(),
                traj: None,
                line: *line,
                col: *col,
            }
        }
        Surf::Un(op, a) => Surf::Un(*op, Box::new(rename(a, traces, trajs, fresh))),
        Surf::Bin(op, a, b) => Surf::Bin(
            *op,
            Box::new(rename(a, traces, trajs, fresh)),
            Box::new(rename(b, traces, trajs, fresh)),
        ),
        s => s.clone(),
    }
}

/// Reverse encoding: every stuttering `b ~ p` becomes a trajectory `t_b` used only on `p`.
///
/// Stutterings that the body never mentions disappear on the way back.
pub fn to_trajectory_form(f: &AhltlFormula) -> String {
    let mut out = String::new();
    for t in &f.traces {
        out.push_str(&format!("{} {}. ", t.quant.keyword(), t.name));
    }
    let traj = |j: usize| format!("t_{}", f.stutters[j].name);
    for (j, s) in f.stutters.iter().enumerate() {
        let kw = match s.quant {
            Quant::Forall => "Atau",
            Quant::Exists => "Etau",
        };
        out.push_str(&format!("{kw} {}. ", traj(j)));
    }
    out.push_str(&render_ltl(
        &f.body,
        &f.atoms,
        &|v, j| format!("{v}@{}:{}", f.traces[f.stutters[j].base].name, traj(j)),
        &|j| format!("moved({})", f.stutters[j].name),
    ));
    out
}
