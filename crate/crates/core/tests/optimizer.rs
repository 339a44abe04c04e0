mod common;

use common::Mini;
use lexiqx::expander::Relation;
use lexiqx::optimizer::{boosted, evaluate_fitness, run_ga, run_ga_from, GaConfig, RoleWeights, TrainingSet, WeightsFile};
use lexiqx::retrieval::evaluate;
use lexiqx::segmenter::RoleType;

fn cfg(pop: usize, iters: usize, seed: u64) -> GaConfig {
    GaConfig { population_size: pop, max_iterations: iters, seed, ..GaConfig::default() }
}

#[test]
fn fitness_of_reference_weightings() {
    let mini = Mini::load();
    let queries = mini.expanded(Relation::Synonym);
    let set = TrainingSet::new(&queries, &mini.index, &mini.qrels, 2000.0, 1000).unwrap();
    let c = GaConfig::default();

    let zero = RoleWeights::uniform(0.0f64);
    assert_eq!(set.run(&zero).unwrap().values().map(Vec::len).sum::<usize>(), 0);
    assert_eq!(evaluate_fitness(&zero, &set, &c).unwrap(), 0.0);

    let ones = RoleWeights::uniform(1.0f64);
    let map = set.map(&ones).unwrap();
    assert_eq!(map, evaluate(&set.run(&ones).unwrap(), &mini.qrels).map);
    assert_eq!(evaluate_fitness(&ones, &set, &c).unwrap(), boosted(map, &c));

    // SC terms never count, whatever the other genes say
    let w = RoleWeights::new(0.3f64, 0.6, 0.9, 0.2);
    assert_eq!(w.weight(RoleType::SC), 0.0);
    assert_eq!(w.weight(RoleType::EC), 0.2);
}

#[test]
fn boost_applies_above_threshold_only() {
    let c = GaConfig::default();
    assert_eq!(boosted(0.4f64, &c), 0.4);
    assert_eq!(boosted(0.5f64, &c), 0.5);
    assert_eq!(boosted(0.8f64, &c), 0.8 * 1.5);
}

#[test]
fn identical_population_without_mutation_stays_put() {
    let mini = Mini::load();
    let queries = mini.expanded(Relation::Hypernym);
    let set = TrainingSet::new(&queries, &mini.index, &mini.qrels, 2000.0, 1000).unwrap();
    let w = RoleWeights::new(0.4f64, 0.7, 0.1, 0.3);
    let c = GaConfig { mutation_per_mille: 0, ..cfg(12, 10, 1) };
    let out = run_ga_from(&c, &set, vec![w; 12]).unwrap();
    assert_eq!(out.best.genes, w);
    assert!(out.history.windows(2).all(|h| h[0] == h[1]));
}

#[test]
fn genes_stay_in_unit_interval_and_history_is_monotone() {
    let mini = Mini::load();
    let queries = mini.expanded(Relation::Coordinate);
    let set = TrainingSet::new(&queries, &mini.index, &mini.qrels, 2000.0, 1000).unwrap();
    for seed in 0..3 {
        let c = GaConfig { mutation_per_mille: 300, ..cfg(20, 15, seed) };
        let out = run_ga::<f64>(&c, &set).unwrap();
        assert!(out.best.genes.in_bounds());
        assert_eq!(out.history.len(), 16);
        assert!(out.history.windows(2).all(|h| h[0] <= h[1]));
        assert_eq!(*out.history.last().unwrap(), out.best.fitness);
        assert!(out.best_map <= 1.0);
    }
}

#[test]
fn stagnation_limit_stops_early() {
    let mini = Mini::load();
    let queries = mini.expanded(Relation::Synonym);
    let set = TrainingSet::new(&queries, &mini.index, &mini.qrels, 2000.0, 1000).unwrap();
    let c = GaConfig { stagnation_limit: Some(3), ..cfg(20, 100, 2) };
    let out = run_ga::<f64>(&c, &set).unwrap();
    assert!(out.history.len() < 101);
    let tail = &out.history[out.history.len() - 4..];
    assert!(tail.iter().all(|&h| h == tail[0]));
}

#[test]
fn single_precision_search_runs() {
    let mini = Mini::load();
    let queries = mini.expanded(Relation::Synonym);
    let set = TrainingSet::new(&queries, &mini.index, &mini.qrels, 2000.0, 1000).unwrap();
    let out = run_ga::<f32>(&cfg(20, 10, 4), &set).unwrap();
    assert!(out.best.genes.in_bounds() && out.best_map > 0.0);
}

#[test]
fn weights_file_round_trip() {
    let w = RoleWeights::new(0.25f64, 0.5, 0.75, 1.0);
    let file = WeightsFile::new(&w, 0.9, 7);
    let json = serde_json::to_string(&file).unwrap();
    let back: WeightsFile = serde_json::from_str(&json).unwrap();
    assert_eq!(back.weights::<f64>().unwrap(), w);
    assert!(json.contains("\"CoI\"") && json.contains("\"SC\""));
}

#[test]
fn config_validation() {
    assert!(GaConfig::parse("population_size = 10\nseed = 3\n", "ga").unwrap().population_size == 10);
    assert!(GaConfig::parse("{\"population_size\": 0}", "ga").and_then(|c| c.validate()).is_err());
    assert!(GaConfig::parse("{\"bogus\": 1}", "ga").is_err());
    assert!(GaConfig::parse("mutation_per_mille = 1001", "ga").and_then(|c| c.validate()).is_err());
}
