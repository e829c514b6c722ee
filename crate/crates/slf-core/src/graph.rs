//! Small graph helpers shared by the automata and game modules.

use alloc::vec::Vec;

/// Tarjan's strongly connected components over an adjacency list.
/// Components are returned in reverse topological order.
pub(crate) fn sccs(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = alloc::vec![usize::MAX; n];
    let mut low = alloc::vec![0usize; n];
    let mut on_stack = alloc::vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut out: Vec<Vec<usize>> = Vec::new();

    // iterative Tarjan: frames of (vertex, edge cursor)
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut cursor)) = call.last_mut() {
            if *cursor < adj[v].len() {
                let w = adj[v][*cursor];
                *cursor += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    out.push(comp);
                }
            }
        }
    }
    out
}

/// True when the component has at least one internal edge (a real cycle).
pub(crate) fn scc_has_cycle(adj: &[Vec<usize>], comp: &[usize]) -> bool {
    if comp.len() > 1 {
        return true;
    }
    let v = comp[0];
    adj[v].contains(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_components() {
        // 0 -> 1 -> 2 -> 0, 3 -> 1
        let adj = alloc::vec![
            alloc::vec![1],
            alloc::vec![2],
            alloc::vec![0],
            alloc::vec![1]
        ];
        let comps = sccs(&adj);
        assert_eq!(comps.len(), 2);
        let big = comps.iter().find(|c| c.len() == 3).unwrap();
        assert!(scc_has_cycle(&adj, big));
        let single = comps.iter().find(|c| c.len() == 1).unwrap();
        assert!(!scc_has_cycle(&adj, single));
    }
}
