use std::collections::VecDeque;
use std::fmt::Write;

use super::{GameContext, GameGraph, GameVertex, Position};
use crate::solver::{Player, SolveResult};

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Graphviz rendering. With a solution, only the part reachable from the
/// verifier-won initial vertices under the verifier strategy is drawn.
pub fn game_to_dot(g: &GameGraph, ctx: &GameContext, restrict: Option<&SolveResult>) -> String {
    let n = g.num_vertices();
    let (keep, edges) = match restrict {
        None => {
            let edges: Vec<(u32, u32)> = (0..n as u32).flat_map(|v| g.succ(v).iter().map(move |&t| (v, t))).collect();
            (vec![true; n], edges)
        }
        Some(r) => strategy_part(g, r),
    };
    let mut out = String::new();
    let _ = writeln!(out, "digraph game {{");
    let _ = writeln!(out, "  node [shape=plaintext fontname=\"Helvetica\"];");
    for v in (0..n as u32).filter(|&v| keep[v as usize]) {
        match g.vertex(v) {
            GameVertex::Error => {
                let _ = writeln!(out, "  n{v} [shape=octagon label=\"error\"];");
            }
            GameVertex::Play(p) => {
                let init = if g.initials().contains(&v) { " peripheries=2" } else { "" };
                let _ = writeln!(out, "  n{v} [label=<{}>{init}];", table(ctx, v, p));
            }
        }
    }
    for (a, b) in edges {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}

fn strategy_part(g: &GameGraph, r: &SolveResult) -> (Vec<bool>, Vec<(u32, u32)>) {
    let a = g.arena();
    let mut keep = vec![false; g.num_vertices()];
    let mut edges = Vec::new();
    let mut queue: VecDeque<u32> = g.initials().iter().copied().filter(|&v| r.verifier_wins(v)).collect();
    for &v in &queue {
        keep[v as usize] = true;
    }
    while let Some(v) = queue.pop_front() {
        let next: Vec<u32> = match (a.owner(v), r.strategy(a, v)) {
            (Player::Verifier, Some(m)) => vec![m],
            _ => a.succ(v).to_vec(),
        };
        for t in next {
            edges.push((v, t));
            if !std::mem::replace(&mut keep[t as usize], true) {
                queue.push_back(t);
            }
        }
    }
    (keep, edges)
}

fn table(ctx: &GameContext, id: u32, p: &Position) -> String {
    let f = ctx.formula();
    let bg = if p.stage == super::Stage::Exists { " BGCOLOR=\"#e8e8e8\"" } else { "" };
    let width = p.windows.iter().map(|w| w.len()).max().unwrap_or(1);
    let mut s = format!("<TABLE BORDER=\"0\" CELLBORDER=\"1\" CELLSPACING=\"0\"{bg}>");
    let _ = write!(
        s,
        "<TR><TD>{}</TD><TD COLSPAN=\"{width}\">v{id} q{}</TD></TR>",
        p.stage.symbol(),
        p.q
    );
    for (i, w) in p.windows.iter().enumerate() {
        let sys = ctx.system(i);
        let _ = write!(s, "<TR><TD>{}</TD>", esc(&f.traces[i].name));
        for (k, &st) in w.iter().enumerate() {
            let mut cell = esc(sys.state_name(st));
            for j in f.stutters_on(i).into_iter().filter(|&j| p.pointers[j] as usize == k) {
                let name = esc(&f.stutters[j].name);
                if p.progressed >> j & 1 == 1 {
                    let _ = write!(cell, "<BR/>↑<B>{name}</B>");
                } else {
                    let _ = write!(cell, "<BR/>↑{name}");
                }
            }
            let _ = write!(s, "<TD>{cell}</TD>");
        }
        for _ in w.len()..width {
            s.push_str("<TD></TD>");
        }
        s.push_str("</TR>");
    }
    s.push_str("</TABLE>");
    s
}
