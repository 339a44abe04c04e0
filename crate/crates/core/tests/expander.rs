mod common;

use common::{car_graph, oracle_lesk, Mini};
use lexiqx::expander::{
    build_pool, expand_query, rank_pool, select_base_terms, take_top_k, ExpandOptions, PoolOptions, Relation,
};
use lexiqx::segmenter::RoleType;
use lexiqx::wsd::{LeskScorer, RelatednessConfig};

#[test]
fn ranking_matches_mean_oracle_relatedness() {
    let mini = Mini::load();
    let scorer = LeskScorer::new(&mini.graph, RelatednessConfig::default()).unwrap();
    let mut ranked_any = 0;
    for (q, senses) in mini.tagged.iter().zip(&mini.senses) {
        let base = select_base_terms(q, senses);
        assert!(base.iter().all(|b| b.role.is_base_role()));
        for rel in Relation::ALL {
            let pool = build_pool(&base, q, senses, &mini.graph, rel, PoolOptions::default()).unwrap();
            let ranked = rank_pool(&pool, rel, &base, &scorer).unwrap();
            assert_eq!(ranked.len(), pool.len());
            for c in &ranked {
                let entry = pool.iter().find(|e| e.term == c.term).unwrap();
                let best = entry
                    .sources
                    .iter()
                    .map(|s| base.iter().map(|b| oracle_lesk(&mini.graph, s, &b.synset)).sum::<u64>() as f64 / base.len() as f64)
                    .fold(f64::MIN, f64::max);
                assert_eq!(c.avg_relatedness, best, "{}", c.term);
                assert!(entry.sources.contains(&c.synset));
            }
            for w in ranked.windows(2) {
                assert!(
                    w[0].avg_relatedness > w[1].avg_relatedness
                        || (w[0].avg_relatedness == w[1].avg_relatedness && w[0].term < w[1].term)
                );
            }
            ranked_any += ranked.len();
        }
    }
    assert!(ranked_any > 0);
}

#[test]
fn top_k_is_a_prefix_of_the_ranking() {
    let mini = Mini::load();
    let scorer = LeskScorer::new(&mini.graph, RelatednessConfig::default()).unwrap();
    let (q, senses) = (&mini.tagged[0], &mini.senses[0]);
    for rel in Relation::ALL {
        let (_, ranked) = expand_query(q, senses, &scorer, ExpandOptions { relation: rel, ..Default::default() }).unwrap();
        for k in 1..=ranked.len() + 2 {
            let top = take_top_k(&ranked, k).unwrap();
            assert_eq!(top.len(), k.min(ranked.len()));
            assert!(top.iter().zip(&ranked).all(|(t, r)| t.term == r.term && t.role == RoleType::EC));
        }
        assert!(take_top_k(&ranked, 0).is_err());
    }
}

#[test]
fn expansion_keeps_originals_and_marks_ec() {
    let mini = Mini::load();
    for q in mini.expanded(Relation::Synonym) {
        assert!(q.expansion.len() <= 5);
        assert!(q.expansion.iter().all(|e| e.role == RoleType::EC));
        assert!(q.original.iter().all(|o| o.role != RoleType::EC));
        for e in &q.expansion {
            assert!(q.original.iter().all(|o| !o.term.eq_ignore_ascii_case(&e.term)));
        }
    }
}

#[test]
fn depth_limit_trims_hypernyms() {
    let g = car_graph();
    let (q, senses) = {
        let mini_like = lexiqx::segmenter::map_roles(
            &lexiqx::segmenter::ParsedQuery {
                qid: "c".into(),
                raw_text: "Ford".into(),
                tokens: vec![lexiqx::segmenter::Token { index: 1, surface: "Ford".into(), pos_tag: "NNP".into() }],
                deps: vec![],
            },
            &Default::default(),
            &lexiqx::lexicon::FrequencyTable::default(),
        )
        .unwrap();
        let scorer = LeskScorer::new(&g, RelatednessConfig::default()).unwrap();
        let senses = lexiqx::wsd::disambiguate_all_words(&mini_like, &scorer).unwrap();
        (mini_like, senses)
    };
    let base = select_base_terms(&q, &senses);
    assert_eq!(base.len(), 1);
    let terms = |depth| -> Vec<String> {
        build_pool(&base, &q, &senses, &g, Relation::Hypernym, PoolOptions { max_depth: depth })
            .unwrap()
            .into_iter()
            .map(|e| e.term)
            .collect()
    };
    assert_eq!(terms(Some(1)), ["car"]);
    assert_eq!(terms(Some(2)), ["automobile", "car", "motorcar"]);
    assert_eq!(terms(None), ["automobile", "car", "motorcar", "vehicle"]);
}
