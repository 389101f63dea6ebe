use indexmap::IndexSet;
use rayon::prelude::*;
use serde::Serialize;

use super::{GameContext, GameVertex};
use crate::error::{Error, Result};
use crate::solver::{Arena, Player};

#[derive(Clone, Debug)]
pub struct BuildOptions {
    pub max_vertices: usize,
    /// 1 builds sequentially; larger values expand each BFS level in parallel.
    pub threads: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_vertices: 5_000_000,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BuildStats {
    pub vertices: usize,
    pub edges: usize,
    pub initials: usize,
    pub priorities: usize,
    pub error_reachable: bool,
}

/// The reachable game, vertex ids in BFS order.
pub struct GameGraph {
    vertices: IndexSet<GameVertex>,
    arena: Arena,
    initials: Vec<u32>,
    stats: BuildStats,
}

impl GameGraph {
    pub fn arena(&self) -> &Arena {
        &self.arena
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, id: u32) -> &GameVertex {
        &self.vertices[id as usize]
    }

    pub fn id_of(&self, v: &GameVertex) -> Option<u32> {
        self.vertices.get_index_of(v).map(|i| i as u32)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (u32, &GameVertex)> {
        self.vertices.iter().enumerate().map(|(i, v)| (i as u32, v))
    }

    pub fn initials(&self) -> &[u32] {
        &self.initials
    }

    pub fn stats(&self) -> &BuildStats {
        &self.stats
    }

    pub fn succ(&self, id: u32) -> &[u32] {
        self.arena.succ(id)
    }
}

/// Breadth-first construction from the initial vertices.
///
/// Each level is expanded (possibly in parallel) and then interned in order,
/// so ids do not depend on the thread count.
pub fn build_game(ctx: &GameContext, opts: &BuildOptions) -> Result<GameGraph> {
    if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
        pool.install(|| run(ctx, opts, true))
    } else {
        run(ctx, opts, false)
    }
}

fn run(ctx: &GameContext, opts: &BuildOptions, parallel: bool) -> Result<GameGraph> {
    let over = || Error::CapacityExceeded {
        phase: "game",
        what: "vertices",
        limit: opts.max_vertices,
    };
    let mut vertices: IndexSet<GameVertex> = IndexSet::new();
    let mut initials = Vec::new();
    for v in ctx.initial_vertices() {
        let (id, _) = vertices.insert_full(v);
        initials.push(id as u32);
    }
    if vertices.len() > opts.max_vertices {
        return Err(over());
    }
    initials.sort_unstable();
    initials.dedup();
    let mut offsets: Vec<u32> = vec![0];
    let mut targets: Vec<u32> = Vec::new();
    let mut done = 0;
    while done < vertices.len() {
        let end = vertices.len();
        let level: Vec<Vec<GameVertex>> = if parallel {
            (done..end).into_par_iter().map(|i| ctx.successors(&vertices[i])).collect()
        } else {
            (done..end).map(|i| ctx.successors(&vertices[i])).collect()
        };
        for succ in level {
            let mut ids: Vec<u32> = Vec::with_capacity(succ.len());
            for s in succ {
                let (id, _) = vertices.insert_full(s);
                ids.push(id as u32);
            }
            if vertices.len() > opts.max_vertices {
                return Err(over());
            }
            ids.sort_unstable();
            ids.dedup();
            targets.extend(ids);
            offsets.push(targets.len() as u32);
        }
        done = end;
    }
    let owner: Vec<Player> = vertices.iter().map(GameVertex::owner).collect();
    let priority: Vec<u32> = vertices.iter().map(|v| ctx.priority(v)).collect();
    let arena = Arena::from_csr(owner, priority, offsets, targets);
    let stats = BuildStats {
        vertices: vertices.len(),
        edges: arena.num_edges(),
        initials: initials.len(),
        priorities: arena.num_priorities(),
        error_reachable: vertices.contains(&GameVertex::Error),
    };
    Ok(GameGraph {
        vertices,
        arena,
        initials,
        stats,
    })
}
