//! Least-fixpoint rank computation on an explicit game graph.
//!
//! At every position Spoiler picks a challenge, Duplicator picks an option,
//! Spoiler picks one of the option's blocks, and Duplicator picks a successor
//! position from that block. A block without successors is an immediate
//! Spoiler win.

pub(crate) const INF: u32 = u32::MAX;

#[derive(Clone, Debug, Default)]
pub(crate) struct Challenge {
    /// Successor positions for each block.
    pub blocks: Vec<Vec<usize>>,
    /// Each option lists indices into `blocks`.
    pub options: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct GameGraph {
    pub challenges: Vec<Vec<Challenge>>,
}

impl GameGraph {
    pub(crate) fn add_position(&mut self) -> usize {
        self.challenges.push(Vec::new());
        self.challenges.len() - 1
    }

    pub(crate) fn len(&self) -> usize {
        self.challenges.len()
    }
}

/// `max` over successors; 0 when there are none.
pub(crate) fn block_value(succ: &[usize], rank: &[u32]) -> u32 {
    succ.iter().map(|&s| rank[s]).max().unwrap_or(0)
}

/// Duplicator's best option against Spoiler's best block.
pub(crate) fn challenge_value(c: &Challenge, rank: &[u32]) -> u32 {
    let blocks: Vec<u32> = c.blocks.iter().map(|b| block_value(b, rank)).collect();
    c.options
        .iter()
        .map(|opt| opt.iter().map(|&b| blocks[b]).min().unwrap_or(INF))
        .max()
        .unwrap_or(0)
}

/// `rank(p) = 1 + min over challenges of challenge_value`, iterated down from
/// `INF` until stable. Positions Spoiler cannot win from stay at `INF`.
pub(crate) fn solve(graph: &GameGraph) -> Vec<u32> {
    let mut rank = vec![INF; graph.len()];
    loop {
        let mut changed = false;
        for p in 0..graph.len() {
            let best = graph.challenges[p].iter().map(|c| challenge_value(c, &rank)).min().unwrap_or(INF);
            let r = best.saturating_add(1);
            if r < rank[p] {
                rank[p] = r;
                changed = true;
            }
        }
        if !changed {
            return rank;
        }
    }
}
