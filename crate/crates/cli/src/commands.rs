use std::fmt;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use log::{info, warn};

use lexiqx::expander::{ExpandOptions, ExpandedQuery, PoolOptions, Relation};
use lexiqx::lexicon::{load_frequencies, load_ncp_lexicon, FrequencyProvider, FrequencyTable, LexicalGraph, NcpLexicon};
use lexiqx::optimizer::{run_ga, GaConfig, RoleWeights, TrainingSet, WeightsFile};
use lexiqx::pipeline::{
    baseline_run, disambiguate_batch, expand_batch, group_senses, load_graph, read_json, read_jsonl, segment_batch,
    sense_records, weighted_run, write_json, write_jsonl, PoolReport, QueryReport, Report,
};
use lexiqx::retrieval::{
    evaluate, load_qrels, load_run, load_topics, paired_t_test, write_run, EvalResult, Index, IndexFrequencies, Run,
    DEFAULT_MU,
};
use lexiqx::segmenter::{detect_and_format, load_parses, RoleMappingTable, RoleTaggedQuery};
use lexiqx::wsd::{LeskScorer, RelatednessConfig, SenseRecord};

use crate::Opts;

pub enum CliError {
    Usage(String),
    Lib(lexiqx::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Lib(e) if e.is_input_error() => 1,
            CliError::Lib(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<lexiqx::Error> for CliError {
    fn from(e: lexiqx::Error) -> Self {
        CliError::Lib(e)
    }
}

type Result<T = ()> = std::result::Result<T, CliError>;

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Lib(lexiqx::Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

/// Path from a flag, or the first default name that exists under the data root.
fn input(flag: &Option<PathBuf>, opts: &Opts, defaults: &[&str], name: &str) -> Result<PathBuf> {
    if let Some(p) = flag {
        return if p.exists() {
            Ok(p.clone())
        } else {
            Err(CliError::Usage(format!("--{name}: {} does not exist", p.display())))
        };
    }
    if let Some(root) = &opts.data {
        for d in defaults {
            let p = root.join(d);
            if p.exists() {
                return Ok(p);
            }
        }
    }
    Err(CliError::Usage(format!(
        "missing --{name} (or set LEXIQX_DATA to a directory containing {})",
        defaults.join(" or ")
    )))
}

fn optional_input(flag: &Option<PathBuf>, opts: &Opts, default: &str, name: &str) -> Result<Option<PathBuf>> {
    match input(flag, opts, &[default], name) {
        Ok(p) => Ok(Some(p)),
        Err(_) if flag.is_none() => Ok(None),
        Err(e) => Err(e),
    }
}

/// An artifact an earlier command wrote into the output directory.
fn artifact(opts: &Opts, name: &str, producer: &str) -> Result<PathBuf> {
    let p = opts.out.join(name);
    if p.exists() {
        Ok(p)
    } else {
        Err(CliError::Usage(format!("{} not found; run `lexiqx {producer}` first", p.display())))
    }
}

fn out_dir(opts: &Opts) -> Result<&Path> {
    fs::create_dir_all(&opts.out).map_err(|e| io_err(&opts.out, e))?;
    Ok(&opts.out)
}

fn pool(opts: &Opts) -> Relation {
    opts.pool.unwrap_or(Relation::Synonym)
}

fn mu(opts: &Opts) -> f64 {
    opts.mu.unwrap_or(DEFAULT_MU)
}

fn graph(opts: &Opts) -> Result<LexicalGraph> {
    let path = input(&opts.wordnet, opts, &["wordnet", "graph.jsonl"], "wordnet")?;
    info!("loading lexical graph from {}", path.display());
    Ok(load_graph(&path)?)
}

fn relatedness(opts: &Opts) -> Result<RelatednessConfig> {
    let cfg = RelatednessConfig {
        first_sense_fallback: !opts.no_fallback,
        ..RelatednessConfig::with_window(opts.window)
    };
    cfg.validate()?;
    Ok(cfg)
}

fn index_dir(opts: &Opts) -> PathBuf {
    opts.index.clone().unwrap_or_else(|| opts.out.join("index"))
}

fn load_index(opts: &Opts) -> Result<Index> {
    let dir = index_dir(opts);
    if !dir.join("manifest.tsv").exists() {
        return Err(CliError::Usage(format!("no index at {}; run `lexiqx index` first", dir.display())));
    }
    Ok(Index::load(&dir)?)
}

fn roles(opts: &Opts) -> Result<Vec<RoleTaggedQuery>> {
    Ok(read_jsonl(&artifact(opts, "roles.jsonl", "segment")?)?)
}

fn expansions(opts: &Opts, pool: Relation) -> Result<Vec<ExpandedQuery>> {
    let name = format!("expansion.{pool}.jsonl");
    Ok(read_jsonl(&artifact(opts, &name, "expand")?)?)
}

fn save_run(run: &Run<f64>, tag: &str, opts: &Opts) -> Result<PathBuf> {
    let path = out_dir(opts)?.join(format!("run.{tag}.txt"));
    let file = File::create(&path).map_err(|e| io_err(&path, e))?;
    write_run(run, tag, BufWriter::new(file)).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

pub fn format(opts: &Opts) -> Result {
    let topics = load_topics(&input(&opts.topics, opts, &["topics.txt"], "topics")?)?;
    let lex = match optional_input(&opts.ncp, opts, "ncp.jsonl", "ncp")? {
        Some(p) => load_ncp_lexicon(&p)?,
        None => NcpLexicon::default(),
    };
    let mut text = String::new();
    for t in &topics {
        text.push_str(&format!("{}\t{}\n", t.qid, detect_and_format(&t.title, &lex)));
    }
    let path = out_dir(opts)?.join("formatted.tsv");
    fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    println!("{} queries -> {}", topics.len(), path.display());
    Ok(())
}

fn frequencies(opts: &Opts) -> Result<Box<dyn FrequencyProvider>> {
    if let Some(p) = optional_input(&opts.freq, opts, "freq.tsv", "freq")? {
        return Ok(Box::new(load_frequencies(&p)?));
    }
    if index_dir(opts).join("manifest.tsv").exists() {
        info!("using index document frequencies for untagged concepts");
        return Ok(Box::new(IndexDf(load_index(opts)?)));
    }
    warn!("no frequency source given; untagged concepts are treated as equally frequent");
    Ok(Box::new(FrequencyTable::default()))
}

struct IndexDf(Index);

impl FrequencyProvider for IndexDf {
    fn frequency(&self, term: &str) -> u64 {
        IndexFrequencies(&self.0).frequency(term)
    }
}

pub fn segment(opts: &Opts) -> Result {
    let parses = load_parses(&input(&opts.parses, opts, &["parses.tsv"], "parses")?)?;
    let table = match &opts.roles_table {
        Some(p) => RoleMappingTable::load(p)?,
        None => RoleMappingTable::default(),
    };
    let freq = frequencies(opts)?;
    let tagged = segment_batch(&parses, &table, freq.as_ref())?;
    let path = out_dir(opts)?.join("roles.jsonl");
    write_jsonl(&tagged, &path)?;
    for q in &tagged {
        let roles: Vec<String> = q.concepts.iter().map(|c| format!("{}/{}", c.surface, c.role)).collect();
        println!("{}\t{}", q.qid, roles.join(" "));
    }
    Ok(())
}

pub fn disambiguate(opts: &Opts) -> Result {
    let queries = roles(opts)?;
    let g = graph(opts)?;
    let scorer = LeskScorer::new(&g, relatedness(opts)?)?;
    let senses = disambiguate_batch(&queries, &scorer)?;
    let records = sense_records(&queries, &senses);
    write_jsonl(&records, &out_dir(opts)?.join("senses.jsonl"))?;
    for r in &records {
        let syn = r.synset.as_ref().map_or("-", |s| s.0.as_str());
        println!("{}\t{}\t{}\t{:?}", r.qid, r.index, syn, r.status);
    }
    Ok(())
}

pub fn expand(opts: &Opts) -> Result {
    let queries = roles(opts)?;
    let records: Vec<SenseRecord> = read_jsonl(&artifact(opts, "senses.jsonl", "disambiguate")?)?;
    let senses = group_senses(&queries, &records);
    let g = graph(opts)?;
    let scorer = LeskScorer::new(&g, relatedness(opts)?)?;
    let pool = pool(opts);
    let expanded = expand_batch(
        &queries,
        &senses,
        &scorer,
        ExpandOptions {
            relation: pool,
            top_k: opts.topk,
            pool: PoolOptions { max_depth: opts.depth },
        },
    )?;
    write_jsonl(&expanded, &out_dir(opts)?.join(format!("expansion.{pool}.jsonl")))?;
    for q in &expanded {
        let terms: Vec<&str> = q.expansion.iter().map(|e| e.term.as_str()).collect();
        println!("{}\t{pool}\t{}", q.qid, terms.join(" "));
    }
    Ok(())
}

pub fn index(opts: &Opts) -> Result {
    let corpus = input(&opts.corpus, opts, &["corpus"], "corpus")?;
    let idx = Index::build(&corpus)?;
    let dir = index_dir(opts);
    idx.save(&dir)?;
    println!("{} documents, {} tokens -> {}", idx.doc_count(), idx.total_tokens(), dir.display());
    Ok(())
}

fn weights_for(opts: &Opts, pool: Relation) -> Result<RoleWeights<f64>> {
    let path = match &opts.weights {
        Some(p) => Some(p.clone()),
        None => Some(opts.out.join(format!("weights.{pool}.json"))).filter(|p| p.exists()),
    };
    match path {
        Some(p) => Ok(read_json::<WeightsFile>(&p)?.weights()?),
        None => {
            info!("no weights file for pool {pool}, using uniform weights");
            Ok(RoleWeights::uniform(1.0))
        }
    }
}

pub fn search(opts: &Opts) -> Result {
    let idx = load_index(opts)?;
    let (run, tag) = match opts.pool {
        None => {
            let queries: Vec<ExpandedQuery> = roles(opts)?
                .iter()
                .map(|q| ExpandedQuery::unexpanded(q, Relation::Synonym))
                .collect();
            (baseline_run(&queries, &idx, mu(opts), opts.top_n)?, "lm".to_string())
        }
        Some(pool) => {
            let w = weights_for(opts, pool)?;
            (weighted_run(&expansions(opts, pool)?, &idx, &w, mu(opts), opts.top_n)?, pool.to_string())
        }
    };
    let path = save_run(&run, &tag, opts)?;
    println!("{} queries -> {}", run.len(), path.display());
    Ok(())
}

fn run_tag(opts: &Opts) -> String {
    opts.pool.map_or_else(|| "lm".to_string(), |p| p.to_string())
}

/// `run.syn.txt` -> `syn`, `mine.txt` -> `mine`.
fn tag_of_run_file(path: &Path) -> String {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match stem.strip_prefix("run.") {
        Some(tag) if !tag.is_empty() => tag.to_string(),
        _ if stem.is_empty() => "run".to_string(),
        _ => stem,
    }
}

fn eval_runs(run: &Run<f64>, baseline: Option<&Run<f64>>, qrels: &lexiqx::retrieval::Qrels) -> Result<EvalResult<f64>> {
    let mut result = evaluate(run, qrels);
    if let Some(base) = baseline {
        let base = evaluate(base, qrels);
        let shared: Vec<&String> = result.per_query.keys().filter(|q| base.per_query.contains_key(*q)).collect();
        if shared.len() >= 2 {
            let a: Vec<f64> = shared.iter().map(|q| base.per_query[*q]).collect();
            let b: Vec<f64> = shared.iter().map(|q| result.per_query[*q]).collect();
            result.t_test = Some(paired_t_test(&a, &b)?);
        } else {
            warn!("fewer than two queries shared with the baseline, skipping the t-test");
        }
    }
    Ok(result)
}

pub fn eval(opts: &Opts) -> Result {
    let qrels = load_qrels(&input(&opts.qrels, opts, &["qrels.txt"], "qrels")?)?;
    let (run_path, tag) = match &opts.run {
        Some(p) => (p.clone(), tag_of_run_file(p)),
        None => {
            let tag = run_tag(opts);
            (artifact(opts, &format!("run.{tag}.txt"), "search")?, tag)
        }
    };
    let run: Run<f64> = load_run(&run_path)?;
    let baseline = opts.baseline.as_deref().map(load_run::<f64>).transpose()?;
    let result = eval_runs(&run, baseline.as_ref(), &qrels)?;
    write_json(&result, &out_dir(opts)?.join(format!("eval.{tag}.json")))?;
    for (q, ap) in &result.per_query {
        println!("{q}\tAP\t{ap:.4}");
    }
    println!("all\tMAP\t{:.4}", result.map);
    if let Some(t) = &result.t_test {
        println!("all\tt\t{:.4}\tp\t{:.4}\tsignificant\t{}", t.t, t.p, t.significant);
    }
    Ok(())
}

fn ga_config(opts: &Opts) -> Result<GaConfig> {
    let mut cfg = match &opts.ga_config {
        Some(p) => GaConfig::load(p)?,
        None => GaConfig::default(),
    };
    if let Some(s) = opts.seed {
        cfg.seed = s;
    }
    if let Some(n) = opts.population {
        cfg.population_size = n;
    }
    if let Some(n) = opts.iterations {
        cfg.max_iterations = n;
    }
    if let Some(m) = opts.mu {
        cfg.mu = m;
    }
    cfg.top_n = opts.top_n;
    cfg.validate()?;
    Ok(cfg)
}

fn train(opts: &Opts, pool: Relation, idx: &Index, qrels: &lexiqx::retrieval::Qrels) -> Result<WeightsFile> {
    let cfg = ga_config(opts)?;
    let queries = expansions(opts, pool)?;
    let set = TrainingSet::new(&queries, idx, qrels, cfg.mu, cfg.top_n)?;
    let outcome = run_ga::<f64>(&cfg, &set)?;
    let file = WeightsFile::new(&outcome.best.genes, outcome.best_map, cfg.seed);
    write_json(&file, &out_dir(opts)?.join(format!("weights.{pool}.json")))?;
    Ok(file)
}

pub fn optimize(opts: &Opts) -> Result {
    let qrels = load_qrels(&input(&opts.qrels, opts, &["qrels.txt"], "qrels")?)?;
    let idx = load_index(opts)?;
    let pool = pool(opts);
    let w = train(opts, pool, &idx, &qrels)?;
    println!(
        "{pool}\tCoI={:.4} DC={:.4} RC={:.4} SC=0 EC={:.4}\tMAP={:.4}",
        w.coi, w.dc, w.rc, w.ec, w.map
    );
    Ok(())
}

pub fn pipeline(opts: &Opts) -> Result {
    let qrels_path = input(&opts.qrels, opts, &["qrels.txt"], "qrels")?;
    if opts.topics.is_some() || input(&None, opts, &["topics.txt"], "topics").is_ok() {
        format(opts)?;
    }
    index(opts)?;
    segment(opts)?;
    disambiguate(opts)?;
    let idx = load_index(opts)?;
    let qrels = load_qrels(&qrels_path)?;

    let tagged = roles(opts)?;
    let unexpanded: Vec<ExpandedQuery> = tagged
        .iter()
        .map(|q| ExpandedQuery::unexpanded(q, Relation::Synonym))
        .collect();
    let base = baseline_run(&unexpanded, &idx, mu(opts), opts.top_n)?;
    save_run(&base, "lm", opts)?;
    let base_eval = evaluate(&base, &qrels);
    write_json(&base_eval, &out_dir(opts)?.join("eval.lm.json"))?;

    let records: Vec<SenseRecord> = read_jsonl(&opts.out.join("senses.jsonl"))?;
    let mut queries: Vec<QueryReport> = tagged
        .iter()
        .map(|q| QueryReport {
            qid: q.qid.clone(),
            roles: q.concepts.iter().map(|c| (c.surface.clone(), c.role)).collect(),
            senses: records
                .iter()
                .filter(|r| r.qid == q.qid)
                .map(|r| {
                    let surface = q.concept(r.index).map_or_else(String::new, |c| c.surface.clone());
                    let status = serde_json::to_value(r.status)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default();
                    (surface, r.synset.as_ref().map(|s| s.0.clone()), status)
                })
                .collect(),
            expansions: Default::default(),
        })
        .collect();

    let pools: Vec<Relation> = opts.pool.map_or_else(|| Relation::ALL.to_vec(), |p| vec![p]);
    let mut pool_reports = Vec::new();
    for pool in pools {
        let pool_opts = Opts {
            pool: Some(pool),
            ..opts.clone()
        };
        expand(&pool_opts)?;
        let w = train(&pool_opts, pool, &idx, &qrels)?;
        let weights = w.weights::<f64>()?;
        let expanded = expansions(&pool_opts, pool)?;
        let run = weighted_run(&expanded, &idx, &weights, mu(opts), opts.top_n)?;
        save_run(&run, pool.as_str(), opts)?;
        let result = eval_runs(&run, Some(&base), &qrels)?;
        write_json(&result, &out_dir(opts)?.join(format!("eval.{pool}.json")))?;
        for (report, q) in queries.iter_mut().zip(&expanded) {
            report
                .expansions
                .insert(pool, q.expansion.iter().map(|e| e.term.clone()).collect());
        }
        pool_reports.push(PoolReport {
            pool,
            map: result.map,
            weights: weights.genes(),
            t_test: result.t_test,
        });
    }
    let report = Report {
        queries,
        baseline_map: base_eval.map,
        pools: pool_reports,
    };
    write_json(&report, &out_dir(opts)?.join("report.json"))?;
    let text = report.render();
    let path = opts.out.join("report.txt");
    fs::write(&path, &text).map_err(|e| io_err(&path, e))?;
    print!("{text}");
    Ok(())
}
