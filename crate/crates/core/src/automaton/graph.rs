//! Graph utilities shared by translation, pruning and path enumeration.

use super::{AcceptanceMode, BuchiAutomaton, Edge};

/// Strongly connected components of `succ` (iterative Tarjan). Returns the
/// component index of every node.
pub(crate) fn scc(succ: &[Vec<usize>]) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut comps = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < succ[v].len() {
                let w = succ[v][*i];
                *i += 1;
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp[w] = comps;
                        if w == v {
                            break;
                        }
                    }
                    comps += 1;
                }
            }
        }
    }
    comp
}

/// States that lie on or can reach a cycle through an accepting state or edge.
pub(crate) fn productive_states(a: &BuchiAutomaton) -> Vec<bool> {
    let mut succ = vec![Vec::new(); a.states];
    for e in &a.edges {
        succ[e.src].push(e.dst);
    }
    let comp = scc(&succ);
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut good = vec![false; ncomp];
    match a.acceptance {
        AcceptanceMode::StateBased => {
            let acc = a.state_flags();
            for e in &a.edges {
                if comp[e.src] == comp[e.dst] && (acc[e.src] || acc[e.dst]) {
                    good[comp[e.src]] = true;
                }
            }
        }
        AcceptanceMode::TransitionBased => {
            let acc = a.edge_flags();
            for (k, e) in a.edges.iter().enumerate() {
                if acc[k] && comp[e.src] == comp[e.dst] {
                    good[comp[e.src]] = true;
                }
            }
        }
    }
    let mut pred = vec![Vec::new(); a.states];
    for e in &a.edges {
        pred[e.dst].push(e.src);
    }
    let mut productive: Vec<bool> = (0..a.states).map(|s| good[comp[s]]).collect();
    let mut work: Vec<usize> = (0..a.states).filter(|&s| productive[s]).collect();
    while let Some(s) = work.pop() {
        for &p in &pred[s] {
            if !productive[p] {
                productive[p] = true;
                work.push(p);
            }
        }
    }
    productive
}

/// States reachable from an initial state.
pub(crate) fn reachable_states(a: &BuchiAutomaton) -> Vec<bool> {
    let out = a.out_edges();
    let mut seen = vec![false; a.states];
    let mut work = Vec::new();
    for &i in &a.initial {
        if !seen[i] {
            seen[i] = true;
            work.push(i);
        }
    }
    while let Some(s) = work.pop() {
        for &k in &out[s] {
            let d = a.edges[k].dst;
            if !seen[d] {
                seen[d] = true;
                work.push(d);
            }
        }
    }
    seen
}

/// Removes states that are unreachable or cannot reach an accepting cycle,
/// renumbering the survivors in their original order. An automaton with an
/// empty language becomes a single non-accepting initial state.
pub(crate) fn trim(a: &BuchiAutomaton) -> BuchiAutomaton {
    let reach = reachable_states(a);
    let prod = productive_states(a);
    let keep: Vec<bool> = (0..a.states).map(|s| reach[s] && prod[s]).collect();
    let mut map = vec![usize::MAX; a.states];
    let mut n = 0;
    for s in 0..a.states {
        if keep[s] {
            map[s] = n;
            n += 1;
        }
    }
    let initial: Vec<usize> = a
        .initial
        .iter()
        .filter(|&&s| keep[s])
        .map(|&s| map[s])
        .collect();
    if initial.is_empty() {
        return BuchiAutomaton {
            states: 1,
            initial: vec![0],
            edges: Vec::new(),
            accepting_states: Vec::new(),
            accepting_edges: Vec::new(),
            acceptance: a.acceptance,
            ap: a.ap.clone(),
        };
    }
    let edge_acc = a.edge_flags();
    let mut edges = Vec::new();
    let mut accepting_edges = Vec::new();
    for (k, e) in a.edges.iter().enumerate() {
        if keep[e.src] && keep[e.dst] {
            if edge_acc[k] {
                accepting_edges.push(edges.len());
            }
            edges.push(Edge {
                src: map[e.src],
                dst: map[e.dst],
                label: e.label.clone(),
            });
        }
    }
    BuchiAutomaton {
        states: n,
        initial,
        edges,
        accepting_states: a
            .accepting_states
            .iter()
            .filter(|&&s| keep[s])
            .map(|&s| map[s])
            .collect(),
        accepting_edges,
        acceptance: a.acceptance,
        ap: a.ap.clone(),
    }
}
