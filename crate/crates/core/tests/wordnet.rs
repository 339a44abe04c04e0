mod common;

use std::sync::OnceLock;

use common::{sid, wordnet_dir};
use lexiqx::lexicon::{export_jsonl, load_wordnet, parse_jsonl, LexicalGraph, Pos};

fn wn() -> &'static LexicalGraph {
    static WN: OnceLock<LexicalGraph> = OnceLock::new();
    WN.get_or_init(|| load_wordnet(&wordnet_dir()).unwrap())
}

#[test]
fn loads_the_full_noun_and_verb_inventory() {
    let g = wn();
    assert_eq!(g.synsets().iter().filter(|s| s.pos == Pos::Noun).count(), 82115);
    assert_eq!(g.synsets().iter().filter(|s| s.pos == Pos::Verb).count(), 13767);
    g.check_acyclic().unwrap();
}

#[test]
fn java_has_island_coffee_and_language_senses() {
    let g = wn();
    let senses = g.senses("java", Pos::Noun);
    assert!(senses.len() >= 3, "{senses:?}");
    let glosses: Vec<&str> = senses.iter().map(|s| g.synset(s).unwrap().gloss.as_str()).collect();
    for needle in ["island", "coffee", "programming language"] {
        assert!(glosses.iter().any(|gl| gl.contains(needle)), "{needle} not in {glosses:?}");
    }
    assert!(senses.contains(&sid("06901053-n")));
}

#[test]
fn hyponym_edges_mirror_hypernym_edges() {
    let g = wn();
    for s in g.synsets() {
        for h in g.hypernyms(&s.id) {
            assert!(g.hyponyms(h).contains(&s.id), "{} -> {h}", s.id);
        }
        for c in g.hyponyms(&s.id) {
            assert!(g.hypernyms(c).contains(&s.id), "{} <- {c}", s.id);
        }
    }
}

#[test]
fn coordinates_share_a_parent() {
    let g = wn();
    let car = sid("02958343-n");
    let coords = g.coordinate_terms(&car).unwrap();
    assert!(!coords.is_empty() && !coords.contains(&car));
    for c in &coords {
        assert!(g.hypernyms(c).iter().any(|p| g.hypernyms(&car).contains(p)), "{c}");
    }
    assert!(coords.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn sense_order_follows_frequency() {
    let g = wn();
    assert_eq!(g.senses("car", Pos::Noun)[0], sid("02958343-n"));
    assert_eq!(g.senses("dog", Pos::Noun)[0], sid("02084071-n"));
}

#[test]
fn lemmatizer_strips_regular_inflections() {
    let g = wn();
    assert_eq!(g.lemmatize("churches", Pos::Noun).as_deref(), Some("church"));
    assert_eq!(g.lemmatize("coping", Pos::Verb).as_deref(), Some("cope"));
    assert_eq!(g.lemmatize("Programming_Languages", Pos::Noun).as_deref(), Some("programming_language"));
    assert_eq!(g.lemmatize("qwzx", Pos::Noun), None);
}

#[test]
fn closure_is_bounded_by_depth() {
    let g = wn();
    let car = sid("02958343-n");
    let one = g.hypernym_closure(&car, Some(1)).unwrap();
    assert_eq!(one, g.hypernyms(&car));
    let all = g.hypernym_closure(&car, None).unwrap();
    assert!(all.contains(&sid("00001740-n")), "entity is the root");
}

#[test]
fn interchange_round_trip() {
    let g = common::car_graph();
    let mut buf = Vec::new();
    export_jsonl(&g, &mut buf).unwrap();
    let back = parse_jsonl(std::str::from_utf8(&buf).unwrap(), "graph").unwrap();
    assert_eq!(back.len(), g.len());
    for s in g.synsets() {
        assert_eq!(back.synset(&s.id).unwrap(), s);
        assert_eq!(back.hypernyms(&s.id), g.hypernyms(&s.id));
    }
}
