/// Lowercased alphanumeric tokens. Apostrophes are kept inside a token
/// (`i'm`) and dropped at its edges; every other character separates tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    let flush = |cur: &mut String, tokens: &mut Vec<String>| {
        let trimmed = cur.trim_end_matches('\'');
        if !trimmed.is_empty() {
            tokens.push(trimmed.to_string());
        }
        cur.clear();
    };
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            cur.extend(ch.to_lowercase());
        } else if (ch == '\'' || ch == '\u{2019}') && !cur.is_empty() {
            cur.push('\'');
        } else {
            flush(&mut cur, &mut tokens);
        }
    }
    flush(&mut cur, &mut tokens);
    tokens
}
