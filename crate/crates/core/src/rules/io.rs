//! Text format: a header `d t model a,b,c` followed by one `<code hex> <label>`
//! line per canonical ball in catalog order. Blank lines and `#` comments are
//! ignored on read.

use std::fs;
use std::path::Path;

use super::{LocalRule, RuleError, SeedModel};

pub fn format_rule(rule: &LocalRule) -> String {
    let mut out = format!("{} {} {} {}\n", rule.d(), rule.t(), rule.model(), rule.output_alphabet().join(","));
    for (code, label) in rule.entries() {
        out.push_str(&code);
        out.push(' ');
        out.push_str(label);
        out.push('\n');
    }
    out
}

pub fn parse_rule(text: &str) -> Result<LocalRule, RuleError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(RuleError::Parse { line: 1, msg: "missing header".into() })?;
    let err = |line: usize, msg: String| RuleError::Parse { line, msg };
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [d, t, model, alphabet] = fields[..] else {
        return Err(err(hline, "header must be `d t model output_alphabet`".into()));
    };
    let d: usize = d.parse().map_err(|_| err(hline, format!("bad degree `{d}`")))?;
    let t: usize = t.parse().map_err(|_| err(hline, format!("bad radius `{t}`")))?;
    let model: SeedModel = model.parse()?;
    let alphabet: Vec<String> = alphabet.split(',').map(str::to_string).collect();
    let mut entries = Vec::new();
    for (line, l) in lines {
        let mut parts = l.split_whitespace();
        let (Some(code), Some(label), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(line, "expected `<code hex> <label>`".into()));
        };
        let code = hex::decode(code).map_err(|e| err(line, format!("bad hex code: {e}")))?;
        entries.push((code, label.to_string()));
    }
    LocalRule::from_table(d, t, model, alphabet, entries)
}

pub fn read_rule(path: &Path) -> Result<LocalRule, RuleError> {
    let text = fs::read_to_string(path).map_err(|e| RuleError::Io(format!("{}: {e}", path.display())))?;
    parse_rule(&text)
}

pub fn write_rule(rule: &LocalRule, path: &Path) -> Result<(), RuleError> {
    fs::write(path, format_rule(rule)).map_err(|e| RuleError::Io(format!("{}: {e}", path.display())))
}
