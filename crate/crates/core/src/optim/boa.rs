//! Bees Algorithm with elite/selected sites, patch shrinking and site abandonment.
//!
//! One cycle:
//! 1. every elite site sends `elite_recruits` foragers, every other selected
//!    site sends `selected_recruits`, each sampled uniformly in the hypercube
//!    `position +- patch_width` clipped to the bounds;
//! 2. a site moves to its best forager when that forager is strictly better;
//!    otherwise its stagnation counter grows and (by default) its patch
//!    shrinks by `shrink_factor`;
//! 3. a selected site whose stagnation counter reaches `stagnation_limit` is
//!    abandoned and replaced by a global random position;
//! 4. the non-selected sites are re-randomized as fresh scouts;
//! 5. the population is re-sorted.
//!
//! Accounting: a cycle costs exactly
//! `n_e * n_re + (n_b - n_e) * n_rb + (n_s - n_b)` evaluations. The replacement
//! for an abandoned site is taken from the previous cycle's scouts (already
//! uniform global samples with a cached fitness); only when more sites are
//! abandoned than there are such scouts is an extra scout evaluated.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::child_rng;
use super::Interval;
use crate::ansatz::uniform_in;
use crate::error::{Result, VqeError};
use crate::loss::Objective;
use crate::scalar::{cast, Real};

const TAG_INIT: u64 = 1;
const TAG_FORAGE: u64 = 2;
const TAG_SCOUT: u64 = 3;
const TAG_REPLACE: u64 = 4;

/// When a site's patch shrinks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatchShrink {
    /// Shrink after the site moves to a better forager.
    OnImprovement,
    /// Shrink after a cycle in which no forager improved the site.
    OnStagnation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoaConfig<T> {
    /// Sites kept in the population (`n_s`).
    pub scouts: usize,
    /// Sites that receive foragers (`n_b`).
    pub selected_sites: usize,
    /// Best sites among the selected ones (`n_e`).
    pub elite_sites: usize,
    /// Foragers per elite site (`n_re`).
    pub elite_recruits: usize,
    /// Foragers per non-elite selected site (`n_rb`).
    pub selected_recruits: usize,
    /// Cycles without improvement before a site is abandoned (`st_lim`).
    pub stagnation_limit: usize,
    /// Initial patch half-width (`ngh0`).
    pub initial_patch_width: T,
    /// Multiplicative patch shrink factor in `(0, 1]`.
    pub shrink_factor: T,
    pub shrink_policy: PatchShrink,
    pub bounds: Interval<T>,
    /// Re-randomize non-selected sites every cycle (classical variant).
    pub refresh_scouts: bool,
    /// Evaluate foragers and scouts on the rayon pool.
    pub parallel: bool,
}

impl<T: Real> Default for BoaConfig<T> {
    fn default() -> Self {
        Self {
            scouts: 10,
            selected_sites: 5,
            elite_sites: 1,
            elite_recruits: 15,
            selected_recruits: 10,
            stagnation_limit: 10,
            initial_patch_width: cast(0.5),
            shrink_factor: cast(0.8),
            shrink_policy: PatchShrink::OnStagnation,
            bounds: Interval::angles(),
            refresh_scouts: true,
            parallel: true,
        }
    }
}

impl<T: Real> BoaConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(VqeError::InvalidConfig(msg.to_string()));
        if !(1 <= self.elite_sites
            && self.elite_sites <= self.selected_sites
            && self.selected_sites <= self.scouts)
        {
            return fail("boa sites must satisfy 1 <= n_e <= n_b <= n_s");
        }
        if !(self.elite_recruits >= self.selected_recruits && self.selected_recruits >= 1) {
            return fail("boa recruits must satisfy n_re >= n_rb >= 1");
        }
        if self.stagnation_limit < 1 {
            return fail("boa stagnation limit must be >= 1");
        }
        if !(self.initial_patch_width > T::zero() && self.initial_patch_width <= T::PI()) {
            return fail("boa initial patch width must lie in (0, pi]");
        }
        if !(self.shrink_factor > T::zero() && self.shrink_factor <= T::one()) {
            return fail("boa shrink factor must lie in (0, 1]");
        }
        self.bounds.validate()
    }

    /// Foragers sent out per cycle.
    pub fn foragers_per_cycle(&self) -> usize {
        self.elite_sites * self.elite_recruits
            + (self.selected_sites - self.elite_sites) * self.selected_recruits
    }

    /// Objective evaluations per cycle (absent overflow abandonments).
    pub fn evaluations_per_cycle(&self) -> usize {
        let scouts = if self.refresh_scouts {
            self.scouts - self.selected_sites
        } else {
            0
        };
        self.foragers_per_cycle() + scouts
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Site<T> {
    pub position: Vec<T>,
    pub fitness: T,
    pub stagnation: usize,
    pub patch_width: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoaState<T> {
    /// Sorted by ascending fitness.
    pub sites: Vec<Site<T>>,
    pub cycle: u64,
    pub best_position: Vec<T>,
    pub best_fitness: T,
    seed: u64,
}

impl<T: Real> BoaState<T> {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn absorb(&mut self, position: &[T], fitness: T) {
        if fitness < self.best_fitness {
            self.best_fitness = fitness;
            self.best_position = position.to_vec();
        }
    }
}

/// Outcome of a single [`boa_cycle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CycleReport {
    pub evaluations: usize,
    pub improved_sites: usize,
    pub abandoned_sites: usize,
}

fn evaluate_all<T: Real, O: Objective<T> + ?Sized>(
    objective: &O,
    positions: &[Vec<T>],
    parallel: bool,
) -> Result<Vec<T>> {
    if parallel {
        positions.par_iter().map(|p| objective.value(p)).collect()
    } else {
        positions.iter().map(|p| objective.value(p)).collect()
    }
}

fn random_position<T: Real>(dim: usize, bounds: &Interval<T>, seed: u64, path: &[u64]) -> Vec<T> {
    let mut rng = child_rng(seed, path);
    (0..dim)
        .map(|_| uniform_in(bounds.lower, bounds.upper, &mut rng))
        .collect()
}

fn sort_sites<T: Real>(sites: &mut [Site<T>]) {
    sites.sort_by(|a, b| {
        a.fitness
            .partial_cmp(&b.fitness)
            .unwrap_or_else(|| a.fitness.is_nan().cmp(&b.fitness.is_nan()))
    });
}

fn fresh_site<T: Real>(position: Vec<T>, fitness: T, width: T) -> Site<T> {
    Site {
        position,
        fitness,
        stagnation: 0,
        patch_width: width,
    }
}

/// Samples `n_s` scouts uniformly from the bounds and sorts them.
pub fn boa_init<T: Real, O: Objective<T> + ?Sized>(
    config: &BoaConfig<T>,
    objective: &O,
    seed: u64,
) -> Result<BoaState<T>> {
    config.validate()?;
    let dim = objective.dimension();
    let positions: Vec<Vec<T>> = (0..config.scouts)
        .map(|s| random_position(dim, &config.bounds, seed, &[TAG_INIT, s as u64]))
        .collect();
    let fitness = evaluate_all(objective, &positions, config.parallel)?;
    let mut sites: Vec<Site<T>> = positions
        .into_iter()
        .zip(fitness)
        .map(|(p, f)| fresh_site(p, f, config.initial_patch_width))
        .collect();
    sort_sites(&mut sites);
    let best = &sites[0];
    Ok(BoaState {
        best_position: best.position.clone(),
        best_fitness: best.fitness,
        sites,
        cycle: 0,
        seed,
    })
}

/// Runs one full cycle in place.
pub fn boa_cycle<T: Real, O: Objective<T> + ?Sized>(
    state: &mut BoaState<T>,
    config: &BoaConfig<T>,
    objective: &O,
) -> Result<CycleReport> {
    let cycle = state.cycle + 1;
    let seed = state.seed;
    let dim = objective.dimension();
    let n_b = config.selected_sites;
    let bounds = config.bounds;

    // Forager positions, grouped by site rank.
    let mut owners = Vec::with_capacity(config.foragers_per_cycle());
    let mut positions = Vec::with_capacity(config.foragers_per_cycle());
    for (rank, site) in state.sites.iter().take(n_b).enumerate() {
        let recruits = if rank < config.elite_sites {
            config.elite_recruits
        } else {
            config.selected_recruits
        };
        for f in 0..recruits {
            let mut rng = child_rng(seed, &[TAG_FORAGE, cycle, rank as u64, f as u64]);
            let w = site.patch_width;
            let p: Vec<T> = site
                .position
                .iter()
                .map(|&x| bounds.clamp(uniform_in(x - w, x + w, &mut rng)))
                .collect();
            owners.push(rank);
            positions.push(p);
        }
    }
    let fitness = evaluate_all(objective, &positions, config.parallel)?;
    let mut report = CycleReport {
        evaluations: positions.len(),
        ..CycleReport::default()
    };

    // Best forager per selected site (first one wins ties).
    let mut best: Vec<Option<usize>> = vec![None; n_b];
    for (k, (&rank, &f)) in owners.iter().zip(&fitness).enumerate() {
        match best[rank] {
            Some(j) if !(f < fitness[j]) => {}
            _ => best[rank] = Some(k),
        }
    }
    for k in 0..positions.len() {
        state.absorb(&positions[k], fitness[k]);
    }

    let mut abandoned = Vec::new();
    for rank in 0..n_b {
        let site = &mut state.sites[rank];
        let improved = best[rank].filter(|&k| fitness[k] < site.fitness);
        match improved {
            Some(k) => {
                site.position = positions[k].clone();
                site.fitness = fitness[k];
                site.stagnation = 0;
                if config.shrink_policy == PatchShrink::OnImprovement {
                    site.patch_width *= config.shrink_factor;
                }
                report.improved_sites += 1;
            }
            None => {
                site.stagnation += 1;
                if config.shrink_policy == PatchShrink::OnStagnation {
                    site.patch_width *= config.shrink_factor;
                }
            }
        }
        if site.stagnation >= config.stagnation_limit {
            abandoned.push(rank);
        }
    }
    report.abandoned_sites = abandoned.len();

    // Previous non-selected sites: uniform global samples with valid fitness.
    let previous_scouts: Vec<Site<T>> = state.sites.split_off(n_b);
    let mut survivors: Vec<Site<T>> = state
        .sites
        .drain(..)
        .enumerate()
        .filter(|(rank, _)| !abandoned.contains(rank))
        .map(|(_, s)| s)
        .collect();

    let mut next = Vec::with_capacity(config.scouts);
    next.append(&mut survivors);

    let mut replacements_needed = abandoned.len();
    let mut fresh_positions = Vec::new();
    if config.refresh_scouts {
        // Recycle old scouts as replacements for abandoned sites.
        let recycled = replacements_needed.min(previous_scouts.len());
        for s in previous_scouts.into_iter().take(recycled) {
            next.push(fresh_site(s.position, s.fitness, config.initial_patch_width));
        }
        replacements_needed -= recycled;
        for k in 0..config.scouts - n_b {
            fresh_positions.push(random_position(dim, &bounds, seed, &[TAG_SCOUT, cycle, k as u64]));
        }
    } else {
        next.extend(previous_scouts);
    }
    for k in 0..replacements_needed {
        fresh_positions.push(random_position(dim, &bounds, seed, &[TAG_REPLACE, cycle, k as u64]));
    }
    let fresh_fitness = evaluate_all(objective, &fresh_positions, config.parallel)?;
    report.evaluations += fresh_positions.len();
    for (p, f) in fresh_positions.into_iter().zip(fresh_fitness) {
        state.absorb(&p, f);
        next.push(fresh_site(p, f, config.initial_patch_width));
    }
    debug_assert_eq!(next.len(), config.scouts);

    sort_sites(&mut next);
    state.sites = next;
    state.cycle = cycle;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loss::{Counted, FnObjective};

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn init_is_deterministic_and_in_bounds() {
        let cfg = BoaConfig::<f64>::default();
        let obj = FnObjective::new(4, sphere);
        let counted = Counted::new(&obj);
        let a = boa_init(&cfg, &counted, 42).unwrap();
        let b = boa_init(&cfg, &obj, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(counted.evaluations(), 10);
        assert_eq!(a.sites.len(), 10);
        for s in &a.sites {
            assert!(s.position.iter().all(|&x| cfg.bounds.contains(x)));
            assert_eq!(s.patch_width, 0.5);
        }
        assert!(a.sites.windows(2).all(|w| w[0].fitness <= w[1].fitness));
    }

    #[test]
    fn default_cycle_costs_sixty() {
        let cfg = BoaConfig::<f64>::default();
        assert_eq!(cfg.evaluations_per_cycle(), 60);
        let obj = FnObjective::new(3, sphere);
        let counted = Counted::new(&obj);
        let mut st = boa_init(&cfg, &counted, 1).unwrap();
        for _ in 0..40 {
            let before = counted.evaluations();
            let r = boa_cycle(&mut st, &cfg, &counted).unwrap();
            assert_eq!(counted.evaluations() - before, 60);
            assert_eq!(r.evaluations, 60);
        }
    }

    #[test]
    fn constant_objective_recycles_every_site() {
        let cfg = BoaConfig::<f64>::default();
        let obj = FnObjective::new(2, |_: &[f64]| 1.0);
        let counted = Counted::new(&obj);
        let mut st = boa_init(&cfg, &counted, 9).unwrap();
        let best = st.best_position.clone();
        let mut abandoned = 0;
        for cycle in 1..=30 {
            let before = counted.evaluations();
            let r = boa_cycle(&mut st, &cfg, &counted).unwrap();
            assert_eq!(counted.evaluations() - before, 60);
            assert_eq!(st.best_position, best);
            assert_eq!(st.best_fitness, 1.0);
            assert_eq!(r.improved_sites, 0);
            if cycle % 10 == 0 {
                assert_eq!(r.abandoned_sites, 5, "cycle {cycle}");
            }
            abandoned += r.abandoned_sites;
            assert!(st.sites.iter().all(|s| s.stagnation < cfg.stagnation_limit));
        }
        assert_eq!(abandoned, 15);
    }

    #[test]
    fn site_abandoned_on_tenth_stagnant_cycle() {
        // Only the origin scores; every other point is flat.
        let cfg = BoaConfig::<f64>::default();
        let obj = FnObjective::new(2, |x: &[f64]| if x.iter().all(|v| *v == 0.0) { -1.0 } else { 0.0 });
        let mut st = boa_init(&cfg, &obj, 3).unwrap();
        let first = st.sites[0].position.clone();
        for _ in 0..9 {
            boa_cycle(&mut st, &cfg, &obj).unwrap();
            assert!(st.sites.iter().any(|s| s.position == first));
        }
        let r = boa_cycle(&mut st, &cfg, &obj).unwrap();
        assert!(r.abandoned_sites >= 1);
        assert!(st.sites.iter().all(|s| s.position != first));
    }

    #[test]
    fn serial_and_parallel_agree() {
        let obj = FnObjective::new(5, sphere);
        let par = BoaConfig::<f64>::default();
        let ser = BoaConfig {
            parallel: false,
            ..par.clone()
        };
        let mut a = boa_init(&par, &obj, 11).unwrap();
        let mut b = boa_init(&ser, &obj, 11).unwrap();
        for _ in 0..15 {
            boa_cycle(&mut a, &par, &obj).unwrap();
            boa_cycle(&mut b, &ser, &obj).unwrap();
        }
        assert_eq!(a, b);
    }

    #[test]
    fn keep_scouts_variant() {
        let cfg = BoaConfig {
            refresh_scouts: false,
            ..BoaConfig::<f64>::default()
        };
        assert_eq!(cfg.evaluations_per_cycle(), 55);
        let obj = FnObjective::new(3, sphere);
        let mut st = boa_init(&cfg, &obj, 2).unwrap();
        let r = boa_cycle(&mut st, &cfg, &obj).unwrap();
        assert_eq!(r.evaluations, 55);
        assert_eq!(st.sites.len(), 10);
    }

    #[test]
    fn config_validation() {
        let ok = BoaConfig::<f64>::default();
        assert!(ok.validate().is_ok());
        for bad in [
            BoaConfig { elite_sites: 0, ..ok.clone() },
            BoaConfig { elite_sites: 6, ..ok.clone() },
            BoaConfig { selected_sites: 11, ..ok.clone() },
            BoaConfig { selected_recruits: 16, ..ok.clone() },
            BoaConfig { stagnation_limit: 0, ..ok.clone() },
            BoaConfig { initial_patch_width: 4.0, ..ok.clone() },
            BoaConfig { shrink_factor: 0.0, ..ok.clone() },
        ] {
            assert!(bad.validate().is_err());
        }
    }
}
