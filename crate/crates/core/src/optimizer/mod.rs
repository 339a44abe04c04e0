//! Genetic search over role-type weights with retrieval MAP as fitness.

mod config;

use log::{debug, info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expander::ExpandedQuery;
use crate::num::Real;
use crate::retrieval::{evaluate, score_weighted_lm, Index, Qrels, Run, WeightedQuery};
use crate::segmenter::RoleType;

pub use config::GaConfig;

/// One weight per role type. SC is not stored: it is always zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RoleWeights<S> {
    pub coi: S,
    pub dc: S,
    pub rc: S,
    pub ec: S,
}

impl<S: Real> RoleWeights<S> {
    pub const GENES: usize = 4;

    pub fn new(coi: S, dc: S, rc: S, ec: S) -> Self {
        RoleWeights { coi, dc, rc, ec }
    }

    pub fn uniform(w: S) -> Self {
        Self::new(w, w, w, w)
    }

    pub fn sc(&self) -> S {
        S::zero()
    }

    /// Weight for a role; unresolved concepts get nothing.
    pub fn weight(&self, role: RoleType) -> S {
        match role {
            RoleType::CoI => self.coi,
            RoleType::DC => self.dc,
            RoleType::RC => self.rc,
            RoleType::EC => self.ec,
            RoleType::SC | RoleType::Untagged => S::zero(),
        }
    }

    pub fn genes(&self) -> [S; 4] {
        [self.coi, self.dc, self.rc, self.ec]
    }

    pub fn from_genes(g: [S; 4]) -> Self {
        Self::new(g[0], g[1], g[2], g[3])
    }

    pub fn clipped(&self) -> Self {
        Self::from_genes(self.genes().map(|g| g.max(S::zero()).min(S::one())))
    }

    pub fn in_bounds(&self) -> bool {
        self.genes().iter().all(|&g| g >= S::zero() && g <= S::one())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chromosome<S> {
    pub genes: RoleWeights<S>,
    pub fitness: S,
}

/// A query's index stems labelled with the role that weights them.
#[derive(Debug, Clone, PartialEq)]
pub struct RoleTerms {
    pub qid: String,
    pub terms: Vec<(String, RoleType)>,
}

impl RoleTerms {
    /// Original concepts keep their roles, expansion terms are EC.
    pub fn new(q: &ExpandedQuery, idx: &Index) -> Self {
        let mut terms = Vec::new();
        let mut push = |term: &str, role: RoleType| {
            let mut wq = WeightedQuery::<f64>::new("");
            wq.push_term(term, 1.0, idx);
            terms.extend(wq.terms.into_iter().map(|(stem, _)| (stem, role)));
        };
        for o in &q.original {
            push(&o.term, o.role);
        }
        for e in &q.expansion {
            push(&e.term, RoleType::EC);
        }
        RoleTerms {
            qid: q.qid.clone(),
            terms,
        }
    }

    pub fn weighted<S: Real>(&self, w: &RoleWeights<S>) -> WeightedQuery<S> {
        WeightedQuery {
            qid: self.qid.clone(),
            terms: self.terms.iter().map(|(t, r)| (t.clone(), w.weight(*r))).collect(),
        }
    }
}

/// Everything fitness depends on besides the weights.
pub struct TrainingSet<'a> {
    pub queries: Vec<RoleTerms>,
    pub index: &'a Index,
    pub qrels: &'a Qrels,
    pub mu: f64,
    pub top_n: usize,
}

impl<'a> TrainingSet<'a> {
    pub fn new(queries: &[ExpandedQuery], index: &'a Index, qrels: &'a Qrels, mu: f64, top_n: usize) -> Result<Self> {
        if queries.is_empty() {
            return Err(Error::Config("no training queries".into()));
        }
        Ok(TrainingSet {
            queries: queries.iter().map(|q| RoleTerms::new(q, index)).collect(),
            index,
            qrels,
            mu,
            top_n,
        })
    }

    /// Runs every query under one weight vector.
    pub fn run<S: Real>(&self, w: &RoleWeights<S>) -> Result<Run<S>> {
        let mut run = Run::new();
        for q in &self.queries {
            let entries = score_weighted_lm(self.index, &q.weighted(w), S::lit(self.mu), self.top_n)?;
            run.insert(q.qid.clone(), entries);
        }
        Ok(run)
    }

    pub fn map<S: Real>(&self, w: &RoleWeights<S>) -> Result<S> {
        Ok(evaluate(&self.run(w)?, self.qrels).map)
    }
}

/// MAP with the boost applied above the threshold.
pub fn boosted<S: Real>(map: S, cfg: &GaConfig) -> S {
    if map > S::lit(cfg.boost_threshold) {
        map * S::lit(cfg.boost_factor)
    } else {
        map
    }
}

/// Undoes [`boosted`].
pub fn unboosted<S: Real>(fitness: S, cfg: &GaConfig) -> S {
    if fitness > S::lit(cfg.boost_threshold) {
        fitness / S::lit(cfg.boost_factor)
    } else {
        fitness
    }
}

pub fn evaluate_fitness<S: Real>(w: &RoleWeights<S>, set: &TrainingSet<'_>, cfg: &GaConfig) -> Result<S> {
    Ok(boosted(set.map(w)?, cfg))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaOutcome<S> {
    pub best: Chromosome<S>,
    /// MAP of the best chromosome.
    pub best_map: S,
    /// Best fitness so far: the initial population, then one entry per generation.
    pub history: Vec<S>,
}

fn random_genes<S: Real>(rng: &mut ChaCha8Rng) -> RoleWeights<S> {
    RoleWeights::from_genes(std::array::from_fn(|_| S::lit(rng.gen::<f64>())))
}

fn score_population<S: Real>(pop: &[RoleWeights<S>], set: &TrainingSet<'_>, cfg: &GaConfig) -> Result<Vec<Chromosome<S>>> {
    pop.par_iter()
        .map(|g| {
            Ok(Chromosome {
                genes: *g,
                fitness: evaluate_fitness(g, set, cfg)?,
            })
        })
        .collect()
}

fn fittest<S: Real>(pop: &[Chromosome<S>]) -> Chromosome<S> {
    let mut best = pop[0];
    for c in &pop[1..] {
        if c.fitness > best.fitness {
            best = *c;
        }
    }
    best
}

/// Fitness-proportionate pick; uniform when every fitness is zero.
fn roulette<'p, S: Real>(pop: &'p [Chromosome<S>], total: f64, rng: &mut ChaCha8Rng) -> &'p Chromosome<S> {
    if total <= 0.0 {
        return &pop[rng.gen_range(0..pop.len())];
    }
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for c in pop {
        acc += c.fitness.as_f64();
        if target < acc {
            return c;
        }
    }
    pop.last().expect("population is non-empty")
}

fn crossover<S: Real>(a: RoleWeights<S>, b: RoleWeights<S>, rng: &mut ChaCha8Rng) -> (RoleWeights<S>, RoleWeights<S>) {
    let cut = rng.gen_range(1..RoleWeights::<S>::GENES);
    let (ga, gb) = (a.genes(), b.genes());
    let pick = |x: [S; 4], y: [S; 4]| std::array::from_fn(|i| if i < cut { x[i] } else { y[i] });
    (RoleWeights::from_genes(pick(ga, gb)), RoleWeights::from_genes(pick(gb, ga)))
}

fn mutate<S: Real>(w: RoleWeights<S>, p: f64, rng: &mut ChaCha8Rng) -> RoleWeights<S> {
    let mut g = w.genes();
    for gene in &mut g {
        if rng.gen::<f64>() < p {
            *gene = S::lit(rng.gen::<f64>());
        }
    }
    RoleWeights::from_genes(g).clipped()
}

/// Evolves a random initial population drawn from `cfg.seed`.
pub fn run_ga<S: Real>(cfg: &GaConfig, set: &TrainingSet<'_>) -> Result<GaOutcome<S>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let initial: Vec<RoleWeights<S>> = (0..cfg.population_size).map(|_| random_genes(&mut rng)).collect();
    evolve(cfg, set, initial, rng)
}

/// Evolves from a given initial population (its size overrides `cfg.population_size`).
pub fn run_ga_from<S: Real>(cfg: &GaConfig, set: &TrainingSet<'_>, initial: Vec<RoleWeights<S>>) -> Result<GaOutcome<S>> {
    let cfg = GaConfig {
        population_size: initial.len(),
        ..cfg.clone()
    };
    cfg.validate()?;
    let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    evolve(&cfg, set, initial.into_iter().map(|w| w.clipped()).collect(), rng)
}

fn evolve<S: Real>(cfg: &GaConfig, set: &TrainingSet<'_>, initial: Vec<RoleWeights<S>>, mut rng: ChaCha8Rng) -> Result<GaOutcome<S>> {
    let p_mut = cfg.mutation_probability();
    let p_cross = cfg.crossover_probability();
    let mut pop = score_population(&initial, set, cfg)?;
    let mut best = fittest(&pop);
    let mut history = vec![best.fitness];
    let mut stale = 0usize;
    let mut warned_uniform = false;

    for generation in 1..=cfg.max_iterations {
        let total: f64 = pop.iter().map(|c| c.fitness.as_f64()).sum();
        if total <= 0.0 && !warned_uniform {
            warn!("every fitness is zero, selecting parents uniformly");
            warned_uniform = true;
        }
        let mut offspring = Vec::with_capacity(cfg.population_size);
        while offspring.len() + 1 < cfg.population_size {
            let a = roulette(&pop, total, &mut rng).genes;
            let b = roulette(&pop, total, &mut rng).genes;
            let (c, d) = if rng.gen::<f64>() < p_cross { crossover(a, b, &mut rng) } else { (a, b) };
            offspring.push(mutate(c, p_mut, &mut rng));
            if offspring.len() + 1 < cfg.population_size {
                offspring.push(mutate(d, p_mut, &mut rng));
            }
        }
        let mut next = vec![best];
        next.extend(score_population(&offspring, set, cfg)?);
        pop = next;

        let champion = fittest(&pop);
        if champion.fitness > best.fitness {
            best = champion;
            stale = 0;
        } else {
            stale += 1;
        }
        history.push(best.fitness);
        debug!("generation {generation}: best fitness {}", best.fitness);
        if cfg.stagnation_limit.is_some_and(|limit| stale >= limit) {
            info!("no improvement for {stale} generations, stopping at generation {generation}");
            break;
        }
    }
    let best_map = set.map(&best.genes)?;
    Ok(GaOutcome { best, best_map, history })
}

/// Weights file written after training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsFile {
    #[serde(rename = "CoI")]
    pub coi: f64,
    #[serde(rename = "DC")]
    pub dc: f64,
    #[serde(rename = "RC")]
    pub rc: f64,
    #[serde(rename = "SC")]
    pub sc: f64,
    #[serde(rename = "EC")]
    pub ec: f64,
    pub map: f64,
    pub seed: u64,
}

impl WeightsFile {
    pub fn new<S: Real>(w: &RoleWeights<S>, map: S, seed: u64) -> Self {
        WeightsFile {
            coi: w.coi.as_f64(),
            dc: w.dc.as_f64(),
            rc: w.rc.as_f64(),
            sc: 0.0,
            ec: w.ec.as_f64(),
            map: map.as_f64(),
            seed,
        }
    }

    pub fn weights<S: Real>(&self) -> Result<RoleWeights<S>> {
        if self.sc != 0.0 {
            return Err(Error::Config(format!("SC weight must be 0, got {}", self.sc)));
        }
        let w = RoleWeights::new(S::lit(self.coi), S::lit(self.dc), S::lit(self.rc), S::lit(self.ec));
        if !w.in_bounds() {
            return Err(Error::Config("role weights must lie in [0, 1]".into()));
        }
        Ok(w)
    }
}
