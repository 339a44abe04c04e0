//! Inverted index, weighted query-likelihood scoring, TREC file formats and
//! AP/MAP evaluation with a paired t-test.

mod corpus;
mod eval;
mod index;
mod score;
mod trec;

pub use corpus::{parse_trec_text, read_corpus, Document};
pub use eval::{average_precision, evaluate, mean_average_precision, paired_t_test, EvalResult, Qrels, Run, TTest, ALPHA};
pub use index::{analyze, Index, IndexFrequencies};
pub use score::{score_lm, score_weighted_lm, RunEntry, WeightedQuery, DEFAULT_MU, DEFAULT_TOP_N};
pub use trec::{load_qrels, load_run, load_topics, parse_qrels, parse_run, parse_topics, write_qrels, write_run, Topic};
