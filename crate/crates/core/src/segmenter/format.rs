use crate::lexicon::NcpLexicon;

/// Rewrites a raw query so each non-compositional phrase is one `_`-joined
/// token.
///
/// Quoted spans are joined and their quotes dropped, `/` becomes ` or `,
/// acronyms expand to their full form, lexicon phrases are joined
/// longest-match-first and proper names are capitalised. Hyphenated and
/// bracketed words pass through untouched.
pub fn detect_and_format(raw_query: &str, lex: &NcpLexicon) -> String {
    let text = raw_query.replace('/', " or ");
    let mut tokens: Vec<String> = Vec::new();
    // atomic tokens (quoted spans, expanded acronyms) never join lexicon phrases
    let mut atomic: Vec<bool> = Vec::new();

    for (i, chunk) in text.split('"').enumerate() {
        let words = chunk.split_whitespace();
        if i % 2 == 1 {
            let joined = words.collect::<Vec<_>>().join("_");
            if !joined.is_empty() {
                tokens.push(joined);
                atomic.push(true);
            }
            continue;
        }
        for w in words {
            match lex.acronyms.get(w) {
                Some(full) => {
                    tokens.push(full.split_whitespace().collect::<Vec<_>>().join("_"));
                    atomic.push(true);
                }
                None => {
                    tokens.push(w.to_string());
                    atomic.push(false);
                }
            }
        }
    }

    let max_len = lex.max_phrase_words();
    let mut out = Vec::with_capacity(tokens.len());
    let mut i = 0;
    while i < tokens.len() {
        let matched = (2..=max_len.min(tokens.len() - i)).rev().find_map(|len| {
            let span = &tokens[i..i + len];
            if atomic[i..i + len].iter().any(|a| *a) {
                return None;
            }
            let key = span.iter().map(|t| t.to_lowercase()).collect::<Vec<_>>().join(" ");
            lex.phrases.contains(&key).then_some((len, key))
        });
        match matched {
            Some((len, key)) => {
                let phrase = if lex.proper_names.contains(&key) {
                    key.split(' ').map(capitalize).collect::<Vec<_>>().join("_")
                } else {
                    tokens[i..i + len].join("_")
                };
                out.push(phrase);
                i += len;
            }
            None => {
                out.push(tokens[i].clone());
                i += 1;
            }
        }
    }
    out.join(" ")
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}
