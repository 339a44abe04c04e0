use lexiqx::expander::porter_stem;

/// Pairs produced by the NLTK reference implementation in its original
/// 1980 mode.
const VOCAB: &str = include_str!("data/porter_vocab.tsv");

/// Two-letter words, which the reference C implementation leaves alone and
/// the NLTK port still strips.
const SHORT_WORD_EXCEPTIONS: &[(&str, &str)] = &[("bs", "bs")];

#[test]
fn matches_reference_stems() {
    let mut total = 0;
    let mut wrong = Vec::new();
    for line in VOCAB.lines().filter(|l| !l.is_empty()) {
        let (word, stem) = line.split_once('\t').expect("word<TAB>stem");
        total += 1;
        let stem = SHORT_WORD_EXCEPTIONS.iter().find(|e| e.0 == word).map_or(stem, |e| e.1);
        let got = porter_stem(word);
        if got != stem {
            wrong.push(format!("{word}: {got} != {stem}"));
        }
    }
    assert!(total > 3000);
    assert!(wrong.is_empty(), "{} of {total} differ:\n{}", wrong.len(), wrong[..wrong.len().min(20)].join("\n"));
}

#[test]
fn short_words_are_untouched() {
    for w in ["a", "is", "as"] {
        assert_eq!(porter_stem(w), w);
    }
}

#[test]
fn idempotent_on_common_forms() {
    for w in ["generalizations", "oscillators", "hopefulness", "relational", "connected"] {
        let once = porter_stem(w);
        assert_eq!(porter_stem(&once), once, "{w}");
    }
}
