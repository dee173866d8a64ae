//! Text formats for instances and models.
//!
//! An instance file has a header `p pot <n> <m>` followed by `m` lines
//! `c <i> <j> <rels>`, where `rels` is a string over `<`, `>`, `=` and `|`.
//! Lines starting with `#` are comments and may appear anywhere.
//!
//! ```text
//! # three tasks
//! p pot 3 3
//! c 0 2 <
//! c 0 1 |
//! c 1 2 <>
//! ```
//!
//! A model file starts with `s yes` or `s no`. A `yes` file then lists
//! `q <var> <class>` for every variable and `o <c1> <c2>` for each edge of the
//! transitive reduction of the strict order on classes.

use std::fmt::Write as _;

use crate::algebra::RelSet;
use crate::error::{PotError, Result};
use crate::network::{model_network, Instance, Model};

fn err(line: usize, msg: impl Into<String>) -> PotError {
    PotError::Parse { line, msg: msg.into() }
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.trim_end();
        if line.trim_start().is_empty() || line.trim_start().starts_with('#') {
            None
        } else {
            Some((k + 1, line.split_whitespace().collect()))
        }
    })
}

fn number(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| err(line, format!("bad {what} {tok:?}")))
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header `p pot <n> <m>`"))?;
    let (n, m) = match header.as_slice() {
        ["p", "pot", n, m] => (number(hline, n, "variable count")?, number(hline, m, "constraint count")?),
        _ => return Err(err(hline, "malformed header, expected `p pot <n> <m>`")),
    };
    if n == 0 {
        return Err(err(hline, "variable count must be positive"));
    }
    let mut ins = Instance::new(n);
    let mut last = hline;
    for (line, toks) in lines {
        last = line;
        match toks.as_slice() {
            ["c", i, j, rels] => {
                let i = number(line, i, "index")?;
                let j = number(line, j, "index")?;
                if i >= n || j >= n {
                    return Err(err(line, format!("index out of range for n = {n}")));
                }
                if i == j {
                    return Err(err(line, "constraint relates a variable to itself"));
                }
                let rels: RelSet = rels.parse().map_err(|e: PotError| err(line, e.to_string()))?;
                ins.push(i, j, rels);
            }
            ["c", ..] => return Err(err(line, "malformed constraint, expected `c <i> <j> <rels>`")),
            ["p", ..] => return Err(err(line, "duplicate header")),
            [tag, ..] => return Err(err(line, format!("unknown line tag {tag:?}"))),
            [] => unreachable!("blank lines are skipped"),
        }
    }
    if ins.constraints.len() != m {
        return Err(err(last, format!("header announces {m} constraints, found {}", ins.constraints.len())));
    }
    Ok(ins)
}

pub fn serialize_instance(ins: &Instance) -> String {
    let mut out = format!("p pot {} {}\n", ins.n, ins.constraints.len());
    for c in &ins.constraints {
        writeln!(out, "c {} {} {}", c.i, c.j, c.rels).expect("writing to a string");
    }
    out
}

/// Contents of a model file: a witness, or the statement that none exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModelFile {
    Yes(Model),
    No,
}

pub fn parse_model(text: &str) -> Result<ModelFile> {
    let mut lines = content_lines(text);
    let (sline, status) = lines.next().ok_or_else(|| err(1, "missing status line `s yes` or `s no`"))?;
    match status.as_slice() {
        ["s", "no"] => {
            if let Some((line, _)) = lines.next() {
                return Err(err(line, "content after `s no`"));
            }
            return Ok(ModelFile::No);
        }
        ["s", "yes"] => {}
        _ => return Err(err(sline, "malformed status line")),
    }
    let mut class_of: Vec<Option<usize>> = Vec::new();
    let mut strict_edges = Vec::new();
    let mut last = sline;
    for (line, toks) in lines {
        last = line;
        match toks.as_slice() {
            ["q", v, c] => {
                let v = number(line, v, "variable")?;
                let c = number(line, c, "class")?;
                if v >= class_of.len() {
                    class_of.resize(v + 1, None);
                }
                if class_of[v].replace(c).is_some() {
                    return Err(err(line, format!("variable {v} assigned twice")));
                }
            }
            ["o", c, d] => strict_edges.push((number(line, c, "class")?, number(line, d, "class")?)),
            [tag, ..] => return Err(err(line, format!("malformed or unknown line starting with {tag:?}"))),
            [] => unreachable!("blank lines are skipped"),
        }
    }
    let class_of: Vec<usize> = class_of
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| err(last, format!("variable {v} has no class"))))
        .collect::<Result<_>>()?;
    let k = class_of.iter().map(|c| c + 1).max().unwrap_or(0);
    let mut used = vec![false; k];
    for &c in &class_of {
        used[c] = true;
    }
    if let Some(c) = used.iter().position(|u| !u) {
        return Err(err(last, format!("class ids are not dense: {c} is unused")));
    }
    let model = Model { class_of, strict_edges };
    model_network(&model).map_err(|e| err(last, e.to_string()))?;
    Ok(ModelFile::Yes(model))
}

pub fn serialize_model(m: &ModelFile) -> String {
    match m {
        ModelFile::No => "s no\n".to_string(),
        ModelFile::Yes(model) => {
            let mut out = String::from("s yes\n");
            for (v, c) in model.class_of.iter().enumerate() {
                writeln!(out, "q {v} {c}").expect("writing to a string");
            }
            for (c, d) in &model.strict_edges {
                writeln!(out, "o {c} {d}").expect("writing to a string");
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instancegen::{generate, GenMode, GenSpec};
    use crate::network::tests::three_tasks;

    #[test]
    fn parses_three_tasks() {
        let ins = parse_instance("p pot 3 3\nc 0 2 <\nc 0 1 |\nc 1 2 <>").unwrap();
        assert_eq!(ins, three_tasks());
    }

    #[test]
    fn comments_and_whitespace() {
        let ins = parse_instance("# hi\np pot 2 1   \n\n  # again\nc 0 1 <=\t\n").unwrap();
        assert_eq!(ins.constraints.len(), 1);
        assert_eq!(parse_instance("p pot 2 0").unwrap(), Instance::new(2));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let cases = [
            ("c 0 0 <", 1),
            ("p pot 2 1\nc 0 0 <", 2),
            ("p pot 0 0", 1),
            ("p pot -1 0", 1),
            ("p pot 2 1\nc 0 2 <", 2),
            ("p pot 2 1\nc 0 1 <<", 2),
            ("p pot 2 1\nc 0 1 x", 2),
            ("p pot 2 1\n# c\nx 0 1 <", 3),
            ("p pot 2 2\nc 0 1 <", 2),
            ("p dag 2 0", 1),
        ];
        for (text, line) in cases {
            match parse_instance(text) {
                Err(PotError::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
    }

    #[test]
    fn instance_round_trip() {
        for seed in 0..50 {
            let mode = if seed % 2 == 0 { GenMode::Planted } else { GenMode::Uniform };
            let (ins, _) = generate(&GenSpec::new(1 + seed as usize % 12, 0.6, seed, mode)).unwrap();
            assert_eq!(parse_instance(&serialize_instance(&ins)).unwrap(), ins);
        }
    }

    #[test]
    fn model_round_trip_and_errors() {
        let m = ModelFile::Yes(Model { class_of: vec![0, 1, 2], strict_edges: vec![(0, 2)] });
        let text = serialize_model(&m);
        assert_eq!(text, "s yes\nq 0 0\nq 1 1\nq 2 2\no 0 2\n");
        assert_eq!(parse_model(&text).unwrap(), m);
        assert_eq!(parse_model("s no\n").unwrap(), ModelFile::No);
        for bad in ["", "s maybe", "s yes\nq 0 0\nq 1", "s yes\nq 0 1", "s yes\nq 0 0\nq 0 0", "s yes\nq 1 0",
            "s yes\nq 0 0\nq 1 1\no 0 1\no 1 0", "s yes\no 0 3\nq 0 0"]
        {
            assert!(matches!(parse_model(bad), Err(PotError::Parse { .. })), "{bad:?}");
        }
    }
}
