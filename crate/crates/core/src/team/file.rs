use std::collections::BTreeMap;

use super::{LassoTrace, Multiteam, PropSet, Team};
use crate::error::{Error, Result};
use crate::formula::syntax::is_ident;

/// Parsed team file: named traces plus optional multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TeamFile {
    pub traces: Vec<(String, LassoTrace)>,
    pub copies: BTreeMap<String, usize>,
}

impl TeamFile {
    pub fn team(&self) -> Team {
        self.traces.iter().map(|(_, t)| t.clone()).collect()
    }

    /// One entry per declared trace, repeated as `multi` lines ask.
    pub fn multiteam(&self) -> Multiteam {
        Multiteam::from_traces(self.traces.iter().flat_map(|(name, t)| {
            let k = self.copies.get(name).copied().unwrap_or(1);
            std::iter::repeat_n(t.clone(), k)
        }))
    }
}

/// Parses the line format
///
/// ```text
/// trace t = {p} / {q}
/// multi t x2
/// ```
///
/// Blank lines and lines starting with `#` are ignored. An empty prefix
/// (`trace c = / {p}`) is accepted.
pub fn parse_team_file(text: &str) -> Result<TeamFile> {
    let mut out = TeamFile::default();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| Error::syntax(line_no, 1, msg);
        if let Some(rest) = line.strip_prefix("trace ") {
            let (name, body) = rest
                .split_once('=')
                .ok_or_else(|| err("expected `trace NAME = STEPS / STEPS`".into()))?;
            let name = name.trim();
            if !is_ident(name) {
                return Err(err(format!("invalid trace name `{name}`")));
            }
            if out.traces.iter().any(|(m, _)| m == name) {
                return Err(err(format!("trace `{name}` declared twice")));
            }
            let (prefix, cycle) = body
                .split_once('/')
                .ok_or_else(|| err("missing `/` between prefix and loop".into()))?;
            let prefix = parse_steps(prefix).map_err(&err)?;
            let cycle = parse_steps(cycle).map_err(&err)?;
            if cycle.is_empty() {
                return Err(err("the loop needs at least one step".into()));
            }
            out.traces.push((name.to_string(), LassoTrace::new(prefix, cycle)?));
        } else if let Some(rest) = line.strip_prefix("multi ") {
            let mut words = rest.split_whitespace();
            let (Some(name), Some(count), None) = (words.next(), words.next(), words.next()) else {
                return Err(err("expected `multi NAME xK`".into()));
            };
            let k: usize = count
                .strip_prefix('x')
                .and_then(|k| k.parse().ok())
                .filter(|&k| k >= 1)
                .ok_or_else(|| err(format!("invalid multiplicity `{count}`")))?;
            if !out.traces.iter().any(|(m, _)| m == name) {
                return Err(err(format!("unknown trace `{name}`")));
            }
            out.copies.insert(name.to_string(), k);
        } else {
            return Err(err(format!("unrecognized line `{line}`")));
        }
    }
    Ok(out)
}

pub(crate) fn parse_steps(text: &str) -> std::result::Result<Vec<PropSet>, String> {
    let mut steps = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('{')
            .ok_or_else(|| format!("expected `{{` at `{rest}`"))?;
        let close = body.find('}').ok_or("unclosed `{`")?;
        steps.push(parse_step_body(&body[..close])?);
        rest = body[close + 1..].trim_start();
    }
    Ok(steps)
}

pub(crate) fn parse_step_body(body: &str) -> std::result::Result<PropSet, String> {
    let mut set = PropSet::new();
    if body.trim().is_empty() {
        return Ok(set);
    }
    for name in body.split(',') {
        let name = name.trim();
        if !is_ident(name) {
            return Err(format!("invalid proposition `{name}`"));
        }
        set.insert(name.to_string());
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::team::props;

    #[test]
    fn parses_example_line() {
        let f = parse_team_file("trace t = {p} / {q}").unwrap();
        let t = &f.traces[0].1;
        assert_eq!(t.prefix(), &[props(["p"])]);
        assert_eq!(t.cycle(), &[props(["q"])]);
    }

    #[test]
    fn multiplicities_build_multiteams() {
        let f = parse_team_file("# two copies\ntrace t = {p} / {q}\ntrace s = {} / {p, q} {}\nmulti t x2\n").unwrap();
        assert_eq!(f.team().len(), 2);
        assert_eq!(f.multiteam().len(), 3);
    }

    #[test]
    fn rendering_parses_back() {
        let f = parse_team_file("trace a = {p} {p,q} / {} {q}\ntrace b = / {p}").unwrap();
        for (_, t) in &f.traces {
            let again = parse_team_file(&format!("trace x = {t}")).unwrap();
            assert_eq!(&again.traces[0].1, t);
        }
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_team_file("trace t = {p} / {q}\ntrace u = {p}").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }), "{err}");
        assert!(parse_team_file("trace t = {p} /").is_err());
        assert!(parse_team_file("multi t x2").is_err());
        assert!(parse_team_file("trace t = {p} / {q}\nmulti t x0").is_err());
        assert!(parse_team_file("trace t = {p q} / {q}").is_err());
    }
}
