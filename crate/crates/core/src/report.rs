//! Markdown and CSV renderings of comparisons.
//!
//! Every rendering is a pure function of its inputs, so rerunning a command
//! reproduces the files byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiment::Comparison;
use crate::seed::fnv1a64;
use crate::stats::{format_float, FriedmanResult, RankTable};

/// Header identifying the tool version, the hashed inputs and the seeds
/// behind a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub version: String,
    pub config_hash: u64,
    pub seeds: Vec<(String, u64)>,
    pub inputs: Vec<String>,
}

impl Provenance {
    /// `config_text` is whatever fully determines the report besides the
    /// seeds: a config file, or the input tables and flags.
    pub fn new(config_text: &str, seeds: Vec<(String, u64)>, inputs: Vec<String>) -> Self {
        Self {
            version: crate::VERSION.to_string(),
            config_hash: fnv1a64(config_text.as_bytes()),
            seeds,
            inputs,
        }
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("version: {}", self.version),
            format!("config_hash: {:016x}", self.config_hash),
        ];
        let seeds: Vec<String> = self.seeds.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out.push(format!("seeds: {}", seeds.join(", ")));
        out.push(format!("seed_derivation: {}", crate::seed::DERIVATION));
        out.push(format!("inputs: {}", self.inputs.join(", ")));
        out
    }
}

fn fixed(v: f64, places: usize) -> String {
    format!("{v:.places$}")
}

/// `cd(k=17,N=12)=7.13`
pub fn cd_line(k: usize, n: usize, cd: f64) -> String {
    format!("cd(k={k},N={n})={}", fixed(cd, 2))
}

pub fn friedman_line(f: &FriedmanResult) -> String {
    format!(
        "Friedman chi2={} df={} p={:.3e}",
        fixed(f.statistic, 3),
        f.df,
        f.p_value
    )
}

/// Classifiers as rows, one average-rank column per labelled table. A
/// classifier missing from a table gets an empty cell.
pub fn rank_table_markdown(tables: &[(&str, &RankTable)]) -> String {
    let mut names: Vec<&str> = Vec::new();
    for (_, t) in tables {
        for c in &t.classifiers {
            if !names.contains(&c.as_str()) {
                names.push(c);
            }
        }
    }
    let mut out = String::from("| Classifier |");
    for (label, _) in tables {
        let _ = write!(out, " {label} |");
    }
    out.push_str("\n|---|");
    out.push_str(&"---:|".repeat(tables.len()));
    out.push('\n');
    for name in names {
        let _ = write!(out, "| {name} |");
        for (_, t) in tables {
            match t.rank_of(name) {
                Some(r) => {
                    let _ = write!(out, " {} |", fixed(r, 2));
                }
                None => out.push_str("  |"),
            }
        }
        out.push('\n');
    }
    out
}

pub fn rank_table_csv(tables: &[(&str, &RankTable)]) -> String {
    let mut names: Vec<&str> = Vec::new();
    for (_, t) in tables {
        for c in &t.classifiers {
            if !names.contains(&c.as_str()) {
                names.push(c);
            }
        }
    }
    let mut out = String::from("classifier");
    for (label, _) in tables {
        let _ = write!(out, ",{label}");
    }
    out.push('\n');
    for name in names {
        out.push_str(name);
        for (_, t) in tables {
            out.push(',');
            if let Some(r) = t.rank_of(name) {
                out.push_str(&format_float(r));
            }
        }
        out.push('\n');
    }
    out
}

/// Groups of classifiers, consecutive in rank order, whose rank span stays
/// below `cd`; only maximal groups of two or more are returned.
pub fn cd_cliques(ranks: &RankTable, cd: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..ranks.k()).collect();
    order.sort_by(|&a, &b| ranks.average_ranks[a].total_cmp(&ranks.average_ranks[b]).then(a.cmp(&b)));
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for start in 0..order.len() {
        let mut end = start;
        while end + 1 < order.len()
            && ranks.average_ranks[order[end + 1]] - ranks.average_ranks[order[start]] < cd
        {
            end += 1;
        }
        if end > start {
            let group = order[start..=end].to_vec();
            let contained = cliques.last().is_some_and(|last| group.iter().all(|g| last.contains(g)));
            if !contained {
                cliques.push(group);
            }
        }
    }
    cliques
}

/// Coordinates for drawing a critical-difference diagram: one point per
/// classifier, the cd bar anchored at rank 1, and one segment per clique.
pub fn cd_diagram_csv(comparisons: &[Comparison]) -> String {
    let mut out = String::from("input,kind,label,x_start,x_end\n");
    for c in comparisons {
        for (name, r) in c.ranks.classifiers.iter().zip(&c.ranks.average_ranks) {
            let _ = writeln!(out, "{},classifier,{},{},{}", c.label, name, format_float(*r), format_float(*r));
        }
        let _ = writeln!(
            out,
            "{},cd_bar,cd,{},{}",
            c.label,
            format_float(1.0),
            format_float(1.0 + c.cd)
        );
        for group in cd_cliques(&c.ranks, c.cd) {
            let names: Vec<&str> = group.iter().map(|&i| c.ranks.classifiers[i].as_str()).collect();
            let lo = c.ranks.average_ranks[group[0]];
            let hi = c.ranks.average_ranks[*group.last().unwrap()];
            let _ = writeln!(
                out,
                "{},clique,{},{},{}",
                c.label,
                names.join(";"),
                format_float(lo),
                format_float(hi)
            );
        }
    }
    out
}

fn nemenyi_csv(comparisons: &[Comparison]) -> String {
    let mut out = String::from("input,classifier_1,classifier_2,rank_gap,cd,significant\n");
    for c in comparisons {
        for g in &c.nemenyi {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                c.label,
                c.ranks.classifiers[g.i],
                c.ranks.classifiers[g.j],
                format_float(g.rank_gap),
                format_float(c.cd),
                g.significant
            );
        }
    }
    out
}

fn bayes_csv(comparisons: &[Comparison]) -> String {
    let mut out =
        String::from("input,classifier_1,classifier_2,rope_lower,rope_upper,p_left,p_rope,p_right,verdict,table_cell,mc_samples,seed\n");
    for c in comparisons {
        for p in &c.bayes {
            let t = &p.posterior;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                c.label,
                p.first,
                p.second,
                format_float(c.rope.lower),
                format_float(c.rope.upper),
                format_float(t.p_left),
                format_float(t.p_rope),
                format_float(t.p_right),
                t.verdict.as_str(),
                p.collapsed(),
                t.mc_samples,
                t.seed
            );
        }
    }
    out
}

fn friedman_csv(comparisons: &[Comparison]) -> String {
    let mut out = String::from("input,metric,k,n,statistic,df,p_value,q_alpha,alpha,cd\n");
    for c in comparisons {
        let (stat, df, p) = match &c.friedman {
            Some(f) => (format_float(f.statistic), f.df.to_string(), format_float(f.p_value)),
            None => Default::default(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{stat},{df},{p},{},{},{}",
            c.label,
            c.matrix.metric,
            c.matrix.k(),
            c.matrix.n(),
            format_float(c.q_alpha),
            format_float(c.alpha),
            format_float(c.cd)
        );
    }
    out
}

/// Pairs as rows, one column per input holding the winner's name or "pe".
fn verdict_table_markdown(comparisons: &[Comparison]) -> String {
    let mut out = String::from("| Classifier 1 | Classifier 2 |");
    for c in comparisons {
        let _ = write!(out, " {} |", c.label);
    }
    out.push_str("\n|---|---|");
    out.push_str(&"---|".repeat(comparisons.len()));
    out.push('\n');
    let Some(first) = comparisons.first() else {
        return out;
    };
    for pair in &first.bayes {
        let _ = write!(out, "| {} | {} |", pair.first, pair.second);
        for c in comparisons {
            let cell = c
                .bayes
                .iter()
                .find(|p| {
                    (p.first == pair.first && p.second == pair.second) || (p.first == pair.second && p.second == pair.first)
                })
                .map(|p| p.collapsed().to_string())
                .unwrap_or_default();
            let _ = write!(out, " {cell} |");
        }
        out.push('\n');
    }
    out.push_str("\npe = practically equivalent or inconclusive\n");
    out
}

fn section_markdown(c: &Comparison) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "## {} ({}, k={}, N={})\n",
        c.label,
        c.matrix.metric,
        c.matrix.k(),
        c.matrix.n()
    );
    match &c.friedman {
        Some(f) => {
            let _ = writeln!(out, "{}\n", friedman_line(f));
        }
        None => out.push_str("Friedman: not computed for two classifiers\n\n"),
    }
    let _ = writeln!(
        out,
        "{} (q={}, alpha={})\n",
        cd_line(c.matrix.k(), c.matrix.n(), c.cd),
        fixed(c.q_alpha, 3),
        c.alpha
    );
    out.push_str("### Nemenyi pairs\n\n| Classifier 1 | Classifier 2 | Rank gap | Significant |\n|---|---|---:|---|\n");
    for g in &c.nemenyi {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} |",
            c.ranks.classifiers[g.i],
            c.ranks.classifiers[g.j],
            fixed(g.rank_gap, 2),
            if g.significant { "yes" } else { "no" }
        );
    }
    let _ = writeln!(
        out,
        "\n### Bayesian pairs\n\nrope: [{}, {}]\n\n| Classifier 1 | Classifier 2 | P(2 better) | P(rope) | P(1 better) | Verdict |\n|---|---|---:|---:|---:|---|",
        c.rope.lower, c.rope.upper
    );
    for p in &c.bayes {
        let t = &p.posterior;
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} |",
            p.first,
            p.second,
            fixed(t.p_left, 4),
            fixed(t.p_rope, 4),
            fixed(t.p_right, 4),
            p.verdict_label()
        );
    }
    out.push('\n');
    out
}

/// Full markdown report for one or more comparisons.
pub fn comparison_markdown(comparisons: &[Comparison], prov: &Provenance) -> String {
    let mut out = String::from("# Classifier comparison\n\n");
    for line in prov.lines() {
        let _ = writeln!(out, "- {line}");
    }
    for c in comparisons {
        let _ = writeln!(
            out,
            "- {}: metric={} rope=[{}, {}] alpha={} mc_samples={}",
            c.label, c.matrix.metric, c.rope.lower, c.rope.upper, c.alpha, c.mc_samples
        );
    }
    out.push_str("\n## Average ranks\n\n");
    let tables: Vec<(&str, &RankTable)> = comparisons.iter().map(|c| (c.label.as_str(), &c.ranks)).collect();
    out.push_str(&rank_table_markdown(&tables));
    out.push('\n');
    for c in comparisons {
        out.push_str(&section_markdown(c));
    }
    out.push_str("## Pairwise Bayesian verdicts\n\n");
    out.push_str(&verdict_table_markdown(comparisons));
    out
}

/// `(file name, contents)` for every report file.
pub fn comparison_files(comparisons: &[Comparison], prov: &Provenance) -> Vec<(String, String)> {
    let tables: Vec<(&str, &RankTable)> = comparisons.iter().map(|c| (c.label.as_str(), &c.ranks)).collect();
    let mut provenance = prov.lines().join("\n");
    provenance.push('\n');
    vec![
        ("report.md".to_string(), comparison_markdown(comparisons, prov)),
        ("provenance.txt".to_string(), provenance),
        ("ranks.csv".to_string(), rank_table_csv(&tables)),
        ("friedman.csv".to_string(), friedman_csv(comparisons)),
        ("nemenyi.csv".to_string(), nemenyi_csv(comparisons)),
        ("bayes.csv".to_string(), bayes_csv(comparisons)),
        ("cd_diagram.csv".to_string(), cd_diagram_csv(comparisons)),
    ]
}

/// Writes files into `dir`, refusing to overwrite existing files unless
/// `force` is set.
pub fn write_files(dir: &Path, files: &[(String, String)], force: bool) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    if !force {
        if let Some((name, _)) = files.iter().find(|(n, _)| dir.join(n).exists()) {
            return Err(Error::Clobber(dir.join(name)));
        }
    }
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
