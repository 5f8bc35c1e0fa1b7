//! Conflict-free coverage search over candidate (node, class) pairs.
//!
//! Candidates are indexed in canonical (node id, class id) order, so index
//! order is the lexicographic order used for witness canonicalisation.

use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Exhausted;

/// Node-expansion budget shared by all phases of one query.
#[derive(Debug)]
pub(crate) struct Budget {
    left: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { left: limit }
    }

    fn tick(&mut self) -> Result<(), Exhausted> {
        if self.left == 0 {
            return Err(Exhausted);
        }
        self.left -= 1;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Goal {
    /// Cover every class (and every node when `nodes`) with at most
    /// `max_size` pairs.
    Cover { nodes: bool, max_size: usize },
    /// Choose exactly `size` pairs with pairwise distinct classes.
    Pack { size: usize },
}

pub(crate) struct Problem {
    pub n_nodes: usize,
    pub n_classes: usize,
    pub node_of: Vec<usize>,
    pub class_of: Vec<usize>,
    /// Symmetric; `conflict[i][j]` means i and j cannot both be chosen.
    pub conflict: Vec<Vec<bool>>,
    by_class: Vec<Vec<usize>>,
    by_node: Vec<Vec<usize>>,
}

struct State {
    chosen: Vec<usize>,
    alive: Vec<bool>,
    class_cov: Vec<u32>,
    node_cov: Vec<u32>,
}

#[derive(Clone, Copy)]
enum Target {
    Class(usize),
    Node(usize),
}

type Visit<'v> = dyn FnMut(&[usize]) -> bool + 'v;

impl Problem {
    pub fn new(
        n_nodes: usize,
        n_classes: usize,
        pairs: &[(usize, usize)],
        conflict: Vec<Vec<bool>>,
    ) -> Self {
        let mut by_class = vec![Vec::new(); n_classes];
        let mut by_node = vec![Vec::new(); n_nodes];
        for (i, &(n, c)) in pairs.iter().enumerate() {
            by_class[c].push(i);
            by_node[n].push(i);
        }
        Problem {
            n_nodes,
            n_classes,
            node_of: pairs.iter().map(|p| p.0).collect(),
            class_of: pairs.iter().map(|p| p.1).collect(),
            conflict,
            by_class,
            by_node,
        }
    }

    fn len(&self) -> usize {
        self.node_of.len()
    }

    /// Initial state with `fixed` chosen and only candidates `>= floor` that
    /// are compatible with `fixed` left alive.
    fn state(&self, fixed: &[usize], floor: usize) -> Option<State> {
        let mut st = State {
            chosen: Vec::with_capacity(fixed.len() + 4),
            alive: (0..self.len()).map(|i| i >= floor).collect(),
            class_cov: vec![0; self.n_classes],
            node_cov: vec![0; self.n_nodes],
        };
        for &i in fixed {
            if fixed.iter().any(|&j| self.conflict[i][j]) {
                return None;
            }
            self.choose(&mut st, i);
        }
        Some(st)
    }

    fn choose(&self, st: &mut State, i: usize) {
        st.chosen.push(i);
        st.alive[i] = false;
        for (j, alive) in st.alive.iter_mut().enumerate() {
            if self.conflict[i][j] {
                *alive = false;
            }
        }
        st.class_cov[self.class_of[i]] += 1;
        st.node_cov[self.node_of[i]] += 1;
    }

    fn unchoose(&self, st: &mut State, i: usize, alive: Vec<bool>) {
        st.chosen.pop();
        st.alive = alive;
        st.class_cov[self.class_of[i]] -= 1;
        st.node_cov[self.node_of[i]] -= 1;
    }

    fn options(&self, st: &State, target: Target) -> impl Iterator<Item = usize> + '_ {
        let list = match target {
            Target::Class(c) => &self.by_class[c],
            Target::Node(n) => &self.by_node[n],
        };
        let alive = st.alive.clone();
        list.iter().copied().filter(move |&i| alive[i])
    }

    fn cover(
        &self,
        st: &mut State,
        nodes: bool,
        max_size: usize,
        budget: &mut Budget,
        visit: &mut Visit<'_>,
    ) -> Result<bool, Exhausted> {
        budget.tick()?;
        let mut uncovered_classes = 0;
        let mut uncovered_nodes = 0;
        // most constrained target first: fewest live candidates
        let mut best: Option<(Target, usize)> = None;
        let mut consider = |target: Target, list: &Vec<usize>| {
            let count = list.iter().filter(|&&i| st.alive[i]).count();
            if best.is_none_or(|(_, b)| count < b) {
                best = Some((target, count));
            }
        };
        for c in 0..self.n_classes {
            if st.class_cov[c] == 0 {
                uncovered_classes += 1;
                consider(Target::Class(c), &self.by_class[c]);
            }
        }
        if nodes {
            for n in 0..self.n_nodes {
                if st.node_cov[n] == 0 {
                    uncovered_nodes += 1;
                    consider(Target::Node(n), &self.by_node[n]);
                }
            }
        }
        let Some((target, count)) = best else {
            return Ok(visit(&st.chosen));
        };
        if count == 0 || st.chosen.len() + uncovered_classes.max(uncovered_nodes) > max_size {
            return Ok(false);
        }
        let options: Vec<usize> = self.options(st, target).collect();
        let mut tried = Vec::new();
        for i in options {
            let saved = st.alive.clone();
            self.choose(st, i);
            let stop = self.cover(st, nodes, max_size, budget, visit);
            self.unchoose(st, i, saved);
            if stop? {
                return Ok(true);
            }
            // every solution containing i has now been seen
            st.alive[i] = false;
            tried.push(i);
        }
        for i in tried {
            st.alive[i] = true;
        }
        Ok(false)
    }

    fn pack(
        &self,
        st: &mut State,
        mut class: usize,
        size: usize,
        budget: &mut Budget,
        visit: &mut Visit<'_>,
    ) -> Result<bool, Exhausted> {
        budget.tick()?;
        if st.chosen.len() == size {
            return Ok(visit(&st.chosen));
        }
        while class < self.n_classes && st.class_cov[class] > 0 {
            class += 1;
        }
        if class == self.n_classes {
            return Ok(false);
        }
        let reachable = (class..self.n_classes)
            .filter(|&c| st.class_cov[c] == 0 && self.by_class[c].iter().any(|&i| st.alive[i]))
            .count();
        if st.chosen.len() + reachable < size {
            return Ok(false);
        }
        let options: Vec<usize> = self.options(st, Target::Class(class)).collect();
        for i in options {
            let saved = st.alive.clone();
            self.choose(st, i);
            let stop = self.pack(st, class + 1, size, budget, visit);
            self.unchoose(st, i, saved);
            if stop? {
                return Ok(true);
            }
        }
        self.pack(st, class + 1, size, budget, visit)
    }

    fn run(
        &self,
        fixed: &[usize],
        floor: usize,
        goal: Goal,
        budget: &mut Budget,
        visit: &mut Visit<'_>,
    ) -> Result<bool, Exhausted> {
        let Some(mut st) = self.state(fixed, floor) else {
            return Ok(false);
        };
        match goal {
            Goal::Cover { nodes, max_size } => self.cover(&mut st, nodes, max_size, budget, visit),
            Goal::Pack { size } => {
                if fixed.iter().map(|&i| self.class_of[i]).collect::<BTreeSet<_>>().len()
                    != fixed.len()
                {
                    return Ok(false);
                }
                self.pack(&mut st, 0, size, budget, visit)
            }
        }
    }

    pub fn exists(
        &self,
        fixed: &[usize],
        floor: usize,
        goal: Goal,
        budget: &mut Budget,
    ) -> Result<bool, Exhausted> {
        self.run(fixed, floor, goal, budget, &mut |_| true)
    }

    fn satisfied_by(&self, chosen: &[usize], goal: Goal) -> bool {
        match goal {
            Goal::Pack { size } => chosen.len() == size,
            Goal::Cover { nodes, .. } => {
                let classes: BTreeSet<usize> = chosen.iter().map(|&i| self.class_of[i]).collect();
                let node_set: BTreeSet<usize> = chosen.iter().map(|&i| self.node_of[i]).collect();
                classes.len() == self.n_classes && (!nodes || node_set.len() == self.n_nodes)
            }
        }
    }

    /// The solution whose ascending index list is lexicographically least.
    /// `goal` must already bound solutions to the minimum size, so that all
    /// solutions have equal length.
    pub fn lex_least(&self, goal: Goal, budget: &mut Budget) -> Result<Option<Vec<usize>>, Exhausted> {
        let mut prefix: Vec<usize> = Vec::new();
        loop {
            if self.satisfied_by(&prefix, goal) {
                return Ok(Some(prefix));
            }
            let floor = prefix.last().map_or(0, |&l| l + 1);
            let mut extended = false;
            for i in floor..self.len() {
                if prefix.iter().any(|&j| self.conflict[i][j]) {
                    continue;
                }
                let mut trial = prefix.clone();
                trial.push(i);
                if self.exists(&trial, i + 1, goal, budget)? {
                    prefix = trial;
                    extended = true;
                    break;
                }
            }
            if !extended {
                return Ok(None);
            }
        }
    }

    /// Every solution for `goal`, each as an ascending index list, sorted.
    pub fn enumerate(&self, goal: Goal, budget: &mut Budget) -> Result<Vec<Vec<usize>>, Exhausted> {
        let mut found = BTreeSet::new();
        self.run(&[], 0, goal, budget, &mut |chosen| {
            let mut s = chosen.to_vec();
            s.sort_unstable();
            found.insert(s);
            false
        })?;
        Ok(found.into_iter().collect())
    }
}
