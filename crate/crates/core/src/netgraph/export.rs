//! Tab-separated graph export: an edge list `user_a<TAB>user_b` and a node
//! attribute file `user<TAB>activity`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::graph::InteractionGraph;
use crate::corpus::MonthKey;
use crate::error::{Error, Result};

pub fn write_edge_list(g: &InteractionGraph, mut out: impl Write) -> Result<()> {
    for &(a, b) in g.edges() {
        writeln!(out, "{}\t{}", g.users()[a as usize], g.users()[b as usize])?;
    }
    Ok(())
}

pub fn write_node_attributes(g: &InteractionGraph, mut out: impl Write) -> Result<()> {
    for (u, a) in g.users().iter().zip(g.activity()) {
        writeln!(out, "{u}\t{a}")?;
    }
    Ok(())
}

/// Reads a graph back from the two exported files.
pub fn read_graph(community: &str, month: MonthKey, edges: impl BufRead, nodes: impl BufRead) -> Result<InteractionGraph> {
    let mut users = Vec::new();
    let mut activity = Vec::new();
    let mut index = HashMap::new();
    for line in nodes.lines() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (u, a) = line
            .split_once('\t')
            .ok_or_else(|| Error::Config(format!("bad node line `{line}`")))?;
        let a: u32 = a
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad activity in `{line}`")))?;
        index.insert(u.to_string(), users.len() as u32);
        users.push(u.to_string());
        activity.push(a);
    }
    let mut list = Vec::new();
    for line in edges.lines() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (a, b) = line
            .split_once('\t')
            .ok_or_else(|| Error::Config(format!("bad edge line `{line}`")))?;
        let lookup = |u: &str| {
            index
                .get(u)
                .copied()
                .ok_or_else(|| Error::Config(format!("edge references unknown user `{u}`")))
        };
        list.push((lookup(a)?, lookup(b)?));
    }
    Ok(InteractionGraph::new(community, month, users, activity, list))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn export_and_reload() {
        let g = InteractionGraph::new(
            "A",
            MonthKey::new(2014, 2).unwrap(),
            vec!["x".into(), "y".into(), "z".into()],
            vec![3, 1, 7],
            [(0, 1), (1, 2)],
        );
        let mut e = Vec::new();
        let mut n = Vec::new();
        write_edge_list(&g, &mut e).unwrap();
        write_node_attributes(&g, &mut n).unwrap();
        assert_eq!(String::from_utf8(e.clone()).unwrap(), "x\ty\ny\tz\n");
        let back = read_graph("A", g.month, e.as_slice(), n.as_slice()).unwrap();
        assert_eq!(back, g);
    }
}
