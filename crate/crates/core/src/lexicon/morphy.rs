use super::Pos;

const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];

const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];

const ADJ_RULES: &[(&str, &str)] = &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")];

fn rules(pos: Pos) -> &'static [(&'static str, &'static str)] {
    match pos {
        Pos::Noun => NOUN_RULES,
        Pos::Verb => VERB_RULES,
        Pos::Adjective => ADJ_RULES,
        Pos::Adverb => &[],
    }
}

/// Candidate base forms of a normalized word, most literal first. For
/// multiword terms only the last word is inflected.
pub(super) fn base_forms(word: &str, pos: Pos) -> impl Iterator<Item = String> + '_ {
    let (prefix, last) = match word.rfind('_') {
        Some(i) => (&word[..=i], &word[i + 1..]),
        None => ("", word),
    };
    std::iter::once(word.to_string()).chain(rules(pos).iter().filter_map(move |(suffix, with)| {
        let stem = last.strip_suffix(suffix)?;
        (!stem.is_empty()).then(|| format!("{prefix}{stem}{with}"))
    }))
}
