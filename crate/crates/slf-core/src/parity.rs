//! Turn-based two-player parity games: Zielonka's recursive solver with
//! winning-strategy extraction, an independent certificate checker, and a
//! positional brute-force reference for small games.
//!
//! Convention: a play is won by Even iff the maximum priority occurring
//! infinitely often is even.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Owner {
    Even,
    Odd,
}

impl Owner {
    pub fn from_priority(p: u32) -> Owner {
        if p % 2 == 0 {
            Owner::Even
        } else {
            Owner::Odd
        }
    }

    pub fn other(self) -> Owner {
        match self {
            Owner::Even => Owner::Odd,
            Owner::Odd => Owner::Even,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ParityGame {
    pub owner: Vec<Owner>,
    pub priority: Vec<u32>,
    pub edges: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameError(pub String);

impl core::fmt::Display for GameError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "bad parity game: {}", self.0)
    }
}

impl ParityGame {
    pub fn new(
        owner: Vec<Owner>,
        priority: Vec<u32>,
        edges: Vec<Vec<usize>>,
    ) -> Result<ParityGame, GameError> {
        let n = owner.len();
        if priority.len() != n || edges.len() != n {
            return Err(GameError("component lengths differ".into()));
        }
        for (v, succs) in edges.iter().enumerate() {
            if succs.is_empty() {
                return Err(GameError(alloc::format!("vertex {v} has no successor")));
            }
            if succs.iter().any(|&u| u >= n) {
                return Err(GameError(alloc::format!("vertex {v} has a dangling edge")));
            }
        }
        Ok(ParityGame { owner, priority, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.owner.len()
    }

    fn reverse_edges(&self) -> Vec<Vec<usize>> {
        let mut rev = alloc::vec![Vec::new(); self.n_vertices()];
        for (v, succs) in self.edges.iter().enumerate() {
            for &u in succs {
                rev[u].push(v);
            }
        }
        rev
    }
}

/// Winning regions and positional strategies for both players; `strategy[v]`
/// is set exactly when `owner[v] == winner[v]`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub winner: Vec<Owner>,
    pub strategy: Vec<Option<usize>>,
}

/// Zielonka's recursive algorithm.
pub fn solve(g: &ParityGame) -> Solution {
    let rev = g.reverse_edges();
    let alive = alloc::vec![true; g.n_vertices()];
    let (win_even, _win_odd, strategy) = zielonka(g, &rev, alive);
    let winner = (0..g.n_vertices())
        .map(|v| if win_even[v] { Owner::Even } else { Owner::Odd })
        .collect();
    Solution { winner, strategy }
}

/// Returns (even region, odd region, merged strategies) over `alive`.
fn zielonka(
    g: &ParityGame,
    rev: &[Vec<usize>],
    alive: Vec<bool>,
) -> (Vec<bool>, Vec<bool>, Vec<Option<usize>>) {
    let n = g.n_vertices();
    if !alive.iter().any(|&a| a) {
        return (alloc::vec![false; n], alloc::vec![false; n], alloc::vec![None; n]);
    }
    let d = (0..n)
        .filter(|&v| alive[v])
        .map(|v| g.priority[v])
        .max()
        .expect("nonempty");
    let player = Owner::from_priority(d);
    let targets: Vec<usize> = (0..n).filter(|&v| alive[v] && g.priority[v] == d).collect();
    let (attr, mut strat_attr) = attractor(g, rev, &alive, player, &targets);

    let mut sub = alive.clone();
    for v in 0..n {
        if attr[v] {
            sub[v] = false;
        }
    }
    let (w_even, w_odd, strat_sub) = zielonka(g, rev, sub);
    let w_opponent = match player {
        Owner::Even => &w_odd,
        Owner::Odd => &w_even,
    };

    if !w_opponent.iter().any(|&b| b) {
        // the whole remaining game is won by `player`
        let mut win_p = alloc::vec![false; n];
        let mut strategy = strat_sub;
        for v in 0..n {
            if alive[v] {
                win_p[v] = true;
            }
        }
        for v in 0..n {
            if attr[v] && g.owner[v] == player {
                strategy[v] = strat_attr[v]
                    .take()
                    .or_else(|| g.edges[v].iter().copied().find(|&u| alive[u]));
            }
        }
        return match player {
            Owner::Even => (win_p, alloc::vec![false; n], strategy),
            Owner::Odd => (alloc::vec![false; n], win_p, strategy),
        };
    }

    // the opponent wins part of the subgame; attract to it and recurse
    let opp_targets: Vec<usize> = (0..n).filter(|&v| w_opponent[v]).collect();
    let w_opponent_set = w_opponent.clone();
    let (b_attr, strat_b) = attractor(g, rev, &alive, player.other(), &opp_targets);
    let mut rest = alive.clone();
    for v in 0..n {
        if b_attr[v] {
            rest[v] = false;
        }
    }
    let (w_even2, w_odd2, strat_rest) = zielonka(g, rev, rest);

    let mut win_even_final = w_even2;
    let mut win_odd_final = w_odd2;
    let mut strategy = strat_rest;
    for v in 0..n {
        if b_attr[v] {
            match player.other() {
                Owner::Even => win_even_final[v] = true,
                Owner::Odd => win_odd_final[v] = true,
            }
            if g.owner[v] == player.other() {
                strategy[v] = if w_opponent_set[v] { strat_sub[v] } else { strat_b[v] };
                if strategy[v].is_none() {
                    // opponent target vertex without an attracting edge keeps
                    // its winning move from the subgame solution
                    strategy[v] = strat_sub[v];
                }
            }
        }
    }
    (win_even_final, win_odd_final, strategy)
}

/// Player-`player` attractor to `targets` within `alive`; also returns the
/// attracting edge for player vertices outside the target set.
fn attractor(
    g: &ParityGame,
    rev: &[Vec<usize>],
    alive: &[bool],
    player: Owner,
    targets: &[usize],
) -> (Vec<bool>, Vec<Option<usize>>) {
    let n = g.n_vertices();
    let mut in_attr = alloc::vec![false; n];
    let mut strat = alloc::vec![None; n];
    let mut out_count = alloc::vec![0usize; n];
    for v in 0..n {
        if alive[v] {
            out_count[v] = g.edges[v].iter().filter(|&&u| alive[u]).count();
        }
    }
    let mut queue: Vec<usize> = Vec::new();
    for &t in targets {
        if alive[t] && !in_attr[t] {
            in_attr[t] = true;
            queue.push(t);
        }
    }
    while let Some(u) = queue.pop() {
        for &v in &rev[u] {
            if !alive[v] || in_attr[v] {
                continue;
            }
            if g.owner[v] == player {
                in_attr[v] = true;
                strat[v] = Some(u);
                queue.push(v);
            } else {
                out_count[v] -= 1;
                if out_count[v] == 0 {
                    in_attr[v] = true;
                    queue.push(v);
                }
            }
        }
    }
    (in_attr, strat)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateError {
    StrategyLeavesRegion { vertex: usize },
    StrategyMissing { vertex: usize },
    StrategyNotAnEdge { vertex: usize },
}

impl core::fmt::Display for CertificateError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CertificateError::StrategyLeavesRegion { vertex } => {
                write!(f, "strategy at vertex {vertex} leaves the claimed region")
            }
            CertificateError::StrategyMissing { vertex } => {
                write!(f, "strategy undefined at owned vertex {vertex}")
            }
            CertificateError::StrategyNotAnEdge { vertex } => {
                write!(f, "strategy at vertex {vertex} is not an edge")
            }
        }
    }
}

/// Checks that `strategy` is winning for `side` on `region`: the region must
/// be opponent-closed and every cycle of the strategy-restricted subgraph
/// must have a dominant priority of `side`'s parity.
pub fn check_certificate(
    g: &ParityGame,
    strategy: &[Option<usize>],
    side: Owner,
    region: &BTreeSet<usize>,
) -> Result<bool, CertificateError> {
    let n = g.n_vertices();
    let mut adj: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
    for &v in region {
        if g.owner[v] == side {
            let u = match strategy[v] {
                Some(u) => u,
                None => return Err(CertificateError::StrategyMissing { vertex: v }),
            };
            if !g.edges[v].contains(&u) {
                return Err(CertificateError::StrategyNotAnEdge { vertex: v });
            }
            if !region.contains(&u) {
                return Err(CertificateError::StrategyLeavesRegion { vertex: v });
            }
            adj[v].push(u);
        } else {
            // a winning region must trap the opponent
            for &u in &g.edges[v] {
                if !region.contains(&u) {
                    return Ok(false);
                }
                adj[v].push(u);
            }
        }
    }
    let bad_parity = match side {
        Owner::Even => 1,
        Owner::Odd => 0,
    };
    let wrong: BTreeSet<u32> = region
        .iter()
        .map(|&v| g.priority[v])
        .filter(|p| p % 2 == bad_parity)
        .collect();
    for &p in &wrong {
        let mut sub: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
        for &v in region {
            if g.priority[v] <= p {
                for &u in &adj[v] {
                    if g.priority[u] <= p {
                        sub[v].push(u);
                    }
                }
            }
        }
        for comp in graph::sccs(&sub) {
            if !graph::scc_has_cycle(&sub, &comp) {
                continue;
            }
            if comp.iter().any(|&v| region.contains(&v) && g.priority[v] == p) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Verifies both regions and strategies of a solution.
pub fn check_solution(g: &ParityGame, sol: &Solution) -> Result<bool, CertificateError> {
    for side in [Owner::Even, Owner::Odd] {
        let region: BTreeSet<usize> =
            (0..g.n_vertices()).filter(|&v| sol.winner[v] == side).collect();
        if region.is_empty() {
            continue;
        }
        if !check_certificate(g, &sol.strategy, side, &region)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Winner per vertex by enumerating Even's positional strategies; usable for
/// games of a handful of vertices only.
pub fn brute_force_winners(g: &ParityGame) -> Vec<Owner> {
    let n = g.n_vertices();
    let even_vertices: Vec<usize> = (0..n).filter(|&v| g.owner[v] == Owner::Even).collect();
    let mut even_wins = alloc::vec![false; n];
    let mut choice = alloc::vec![0usize; even_vertices.len()];
    loop {
        let mut adj: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
        for v in 0..n {
            if g.owner[v] == Owner::Even {
                let k = even_vertices.iter().position(|&x| x == v).expect("even vertex");
                adj[v].push(g.edges[v][choice[k]]);
            } else {
                adj[v] = g.edges[v].clone();
            }
        }
        // vertices from which some path reaches a cycle with odd dominant
        // priority; all remaining choices on `adj` belong to Odd
        let mut odd_can_win = alloc::vec![false; n];
        let odd_priorities: BTreeSet<u32> =
            (0..n).map(|v| g.priority[v]).filter(|p| p % 2 == 1).collect();
        for &p in &odd_priorities {
            let mut sub: Vec<Vec<usize>> = alloc::vec![Vec::new(); n];
            for v in 0..n {
                if g.priority[v] <= p {
                    for &u in &adj[v] {
                        if g.priority[u] <= p {
                            sub[v].push(u);
                        }
                    }
                }
            }
            for comp in graph::sccs(&sub) {
                if graph::scc_has_cycle(&sub, &comp) && comp.iter().any(|&v| g.priority[v] == p) {
                    for &v in &comp {
                        odd_can_win[v] = true;
                    }
                }
            }
        }
        let rev = {
            let mut rev = alloc::vec![Vec::new(); n];
            for (v, succs) in adj.iter().enumerate() {
                for &u in succs {
                    rev[u].push(v);
                }
            }
            rev
        };
        let mut stack: Vec<usize> = (0..n).filter(|&v| odd_can_win[v]).collect();
        while let Some(u) = stack.pop() {
            for &v in &rev[u] {
                if !odd_can_win[v] {
                    odd_can_win[v] = true;
                    stack.push(v);
                }
            }
        }
        for v in 0..n {
            if !odd_can_win[v] {
                even_wins[v] = true;
            }
        }
        let mut k = 0;
        loop {
            if k == even_vertices.len() {
                return (0..n)
                    .map(|v| if even_wins[v] { Owner::Even } else { Owner::Odd })
                    .collect();
            }
            choice[k] += 1;
            if choice[k] < g.edges[even_vertices[k]].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
        if even_vertices.is_empty() {
            return (0..n)
                .map(|v| if even_wins[v] { Owner::Even } else { Owner::Odd })
                .collect();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::safra::testing::splitmix;

    fn game(owner: &[Owner], prio: &[u32], edges: &[&[usize]]) -> ParityGame {
        ParityGame::new(
            owner.to_vec(),
            prio.to_vec(),
            edges.iter().map(|e| e.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_vertex_priorities() {
        for owner in [Owner::Even, Owner::Odd] {
            let g = game(&[owner], &[0], &[&[0]]);
            let sol = solve(&g);
            assert_eq!(sol.winner[0], Owner::Even);
            assert!(check_solution(&g, &sol).unwrap());
            let g = game(&[owner], &[1], &[&[0]]);
            let sol = solve(&g);
            assert_eq!(sol.winner[0], Owner::Odd);
            assert!(check_solution(&g, &sol).unwrap());
        }
    }

    #[test]
    fn corrupted_strategy_rejected() {
        // Even must move 0 -> 1 (priority 2 loop); moving to 2 loses (prio 1)
        let g = game(
            &[Owner::Even, Owner::Even, Owner::Even],
            &[0, 2, 1],
            &[&[1, 2], &[1], &[2]],
        );
        let sol = solve(&g);
        assert_eq!(sol.winner[0], Owner::Even);
        assert!(check_solution(&g, &sol).unwrap());
        let region: BTreeSet<usize> = [0usize, 1, 2].into_iter().collect();
        let bad = alloc::vec![Some(2), Some(1), Some(2)];
        assert!(!check_certificate(&g, &bad, Owner::Even, &region).unwrap());
    }

    fn random_game(seed: &mut u64, n: usize, max_prio: u32) -> ParityGame {
        let owner: Vec<Owner> = (0..n)
            .map(|_| if splitmix(seed) % 2 == 0 { Owner::Even } else { Owner::Odd })
            .collect();
        let priority: Vec<u32> =
            (0..n).map(|_| (splitmix(seed) % (max_prio as u64 + 1)) as u32).collect();
        let edges: Vec<Vec<usize>> = (0..n)
            .map(|_| {
                let mut succs: Vec<usize> = (0..n).filter(|_| splitmix(seed) % 100 < 35).collect();
                if succs.is_empty() {
                    succs.push((splitmix(seed) as usize) % n);
                }
                succs
            })
            .collect();
        ParityGame::new(owner, priority, edges).unwrap()
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut seed = 42u64;
        for _ in 0..60 {
            let n = 2 + (splitmix(&mut seed) as usize) % 6;
            let g = random_game(&mut seed, n, 4);
            let sol = solve(&g);
            assert!(check_solution(&g, &sol).unwrap(), "certificate failed: {g:?}");
            let brute = brute_force_winners(&g);
            assert_eq!(sol.winner, brute, "winner mismatch on {g:?}");
        }
    }

    #[test]
    fn priority_shift_invariance() {
        let mut seed = 7u64;
        for _ in 0..20 {
            let g = random_game(&mut seed, 6, 3);
            let mut shifted = g.clone();
            for p in &mut shifted.priority {
                *p += 2;
            }
            assert_eq!(solve(&g).winner, solve(&shifted).winner);
        }
    }

    #[test]
    fn solver_certificates_on_larger_games() {
        let mut seed = 99u64;
        for _ in 0..20 {
            let g = random_game(&mut seed, 50, 6);
            let sol = solve(&g);
            assert!(check_solution(&g, &sol).unwrap());
        }
    }
}
