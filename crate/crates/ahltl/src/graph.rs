//! Small graph utilities shared by the automata, solver and oracle code.

const UNVISITED: u32 = u32::MAX;

/// Strongly connected components of the part of a graph reachable from a root set.
#[derive(Debug, Clone)]
pub struct Sccs {
    /// Component id per node, `u32::MAX` for nodes not reached from the roots.
    pub comp: Vec<u32>,
    /// Whether a component contains a cycle (more than one node or a self-loop).
    pub cyclic: Vec<bool>,
}

impl Sccs {
    pub fn count(&self) -> usize {
        self.cyclic.len()
    }

    pub fn reached(&self, v: usize) -> bool {
        self.comp[v] != UNVISITED
    }

    /// True if `v` was reached and lies on a cycle.
    pub fn on_cycle(&self, v: usize) -> bool {
        self.reached(v) && self.cyclic[self.comp[v] as usize]
    }
}

/// Iterative Tarjan over nodes `0..n`, exploring from `roots` only.
pub fn sccs<I, F>(n: usize, roots: impl IntoIterator<Item = usize>, mut succ: F) -> Sccs
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNVISITED; n];
    let mut cyclic = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut frames: Vec<(usize, Vec<usize>, usize)> = Vec::new();
    let mut counter = 0u32;

    for root in roots {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, succ(root).into_iter().collect(), 0));

        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.2 < frame.1.len() {
                let w = frame.1[frame.2];
                frame.2 += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, succ(w).into_iter().collect(), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            let (v, succs, _) = frames.pop().expect("frame");
            if let Some(parent) = frames.last() {
                let p = parent.0;
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                let id = cyclic.len() as u32;
                let mut size = 0usize;
                loop {
                    let w = stack.pop().expect("scc stack");
                    on_stack[w] = false;
                    comp[w] = id;
                    size += 1;
                    if w == v {
                        break;
                    }
                }
                cyclic.push(size > 1 || succs.contains(&v));
            }
        }
    }
    Sccs { comp, cyclic }
}

/// Nodes reachable from `roots`.
pub fn reachable<I, F>(n: usize, roots: impl IntoIterator<Item = usize>, mut succ: F) -> Vec<bool>
where
    F: FnMut(usize) -> I,
    I: IntoIterator<Item = usize>,
{
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    for r in roots {
        if !seen[r] {
            seen[r] = true;
            queue.push_back(r);
        }
    }
    while let Some(v) = queue.pop_front() {
        for w in succ(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}
