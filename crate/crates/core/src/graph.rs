//! Strongly connected components of implicit digraphs.

/// Component index of every node (Tarjan, iterative). Components are
/// numbered in reverse topological order.
pub(crate) fn scc<F, I>(n: usize, succ: F) -> Vec<usize>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    let mut call: Vec<(usize, I)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, succ(root)));
        while let Some((v, it)) = call.last_mut() {
            let v = *v;
            match it.next() {
                Some(w) if index[w] == UNSEEN => {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, succ(w)));
                }
                Some(w) => {
                    if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                }
                None => {
                    call.pop();
                    if let Some((u, _)) = call.last() {
                        let u = *u;
                        low[u] = low[u].min(low[v]);
                    }
                    if low[v] == index[v] {
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp[w] = next_comp;
                            if w == v {
                                break;
                            }
                        }
                        next_comp += 1;
                    }
                }
            }
        }
    }
    comp
}

/// Nodes lying on some cycle.
pub(crate) fn cyclic<F, I>(n: usize, succ: F) -> Vec<bool>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    let comp = scc(n, &succ);
    let mut size = vec![0usize; n];
    for &c in &comp {
        size[c] += 1;
    }
    (0..n)
        .map(|v| size[comp[v]] > 1 || succ(v).any(|w| w == v))
        .collect()
}

/// Forward closure of `seeds`.
pub(crate) fn closure<F, I>(n: usize, seeds: &[bool], succ: F) -> Vec<bool>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = usize>,
{
    let mut seen = seeds.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&v| seeds[v]).collect();
    while let Some(v) = stack.pop() {
        for w in succ(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components() {
        let adj: Vec<Vec<usize>> = vec![vec![1], vec![2], vec![0, 3], vec![3], vec![]];
        let c = scc(5, |v| adj[v].iter().copied());
        assert_eq!(c[0], c[1]);
        assert_eq!(c[1], c[2]);
        assert_ne!(c[2], c[3]);
        let cy = cyclic(5, |v| adj[v].iter().copied());
        assert_eq!(cy, vec![true, true, true, true, false]);
    }
}
