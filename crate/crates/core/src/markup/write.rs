use std::fmt::Write;

use super::{AttributeDecl, CollectionDoc, OntologyDoc};
use crate::scales::Query;

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            // attribute-value normalization would turn these into spaces
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

fn line(out: &mut String, depth: usize, text: &str) {
    for _ in 0..depth {
        out.push_str("  ");
    }
    out.push_str(text);
    out.push('\n');
}

fn terms(ts: &[String]) -> String {
    ts.iter().map(|t| format!("<TERM NAME=\"{}\"/>", esc(t))).collect()
}

pub fn write_ontology(onto: &OntologyDoc) -> String {
    let mut out = String::new();
    line(&mut out, 0, &format!("<ONTOLOGY NAME=\"{}\" VERSION=\"{}\">", esc(&onto.name), esc(&onto.version)));
    for c in &onto.categories {
        line(&mut out, 1, &format!("<CATEGORY NAME=\"{}\"/>", esc(c)));
    }
    for f in &onto.functions {
        let head = format!(
            "<FNSCHEMA NAME=\"{}\" ARGTYPE=\"{}\" IMAGETYPE=\"{}\"",
            esc(&f.name),
            esc(&f.arg_type),
            f.image_type
        );
        if f.values.is_empty() {
            line(&mut out, 1, &format!("{head}/>"));
        } else {
            line(&mut out, 1, &format!("{head}>"));
            for v in &f.values {
                line(&mut out, 2, &format!("<VALUE NAME=\"{}\"/>", esc(v)));
            }
            line(&mut out, 1, "</FNSCHEMA>");
        }
    }
    for decl in &onto.scales {
        let s = &decl.scale;
        line(&mut out, 1, &format!("<SCALE CATEGORY=\"{}\" NAME=\"{}\">", esc(&decl.category), esc(s.name())));
        for t in s.terms() {
            line(&mut out, 2, &format!("<TERM NAME=\"{}\"/>", esc(t)));
        }
        for imp in s.basis() {
            line(&mut out, 2, "<IMPLICATION>");
            line(&mut out, 3, &format!("<IF>{}</IF>", terms(&imp.premise)));
            if !imp.is_incompatibility() {
                line(&mut out, 3, &format!("<THEN>{}</THEN>", terms(&imp.conclusion)));
            }
            line(&mut out, 2, "</IMPLICATION>");
        }
        line(&mut out, 1, "</SCALE>");
    }
    line(&mut out, 0, "</ONTOLOGY>");
    out
}

fn write_query(out: &mut String, depth: usize, q: &Query, variable: &str) {
    match q {
        Query::Compare { function, order, constant } => {
            line(out, depth, &format!("<FN2REL NAME=\"{}\" ORDER=\"{}\">", esc(function), order.keyword()));
            line(out, depth + 1, &format!("<ARGUMENT VALUE=\"{}\"/>", esc(variable)));
            line(out, depth + 1, &format!("<ARGUMENT VALUE=\"{}\"/>", esc(&constant.to_string())));
            line(out, depth, "</FN2REL>");
        }
        Query::And(qs) | Query::Or(qs) => {
            let tag = if matches!(q, Query::And(_)) { "AND" } else { "OR" };
            if qs.is_empty() {
                line(out, depth, &format!("<{tag}/>"));
            } else {
                line(out, depth, &format!("<{tag}>"));
                for sub in qs {
                    write_query(out, depth + 1, sub, variable);
                }
                line(out, depth, &format!("</{tag}>"));
            }
        }
        Query::Not(sub) => {
            line(out, depth, "<NOT>");
            write_query(out, depth + 1, sub, variable);
            line(out, depth, "</NOT>");
        }
    }
}

fn write_attribute(out: &mut String, a: &AttributeDecl) {
    line(out, 1, &format!("<ATTRIBUTE SCALE=\"{}\" KEY=\"{}\">", esc(&a.scale), esc(&a.key)));
    line(out, 2, &format!("<QUERY VARIABLE=\"{}\" CATEGORY=\"{}\">", esc(&a.variable), esc(&a.category)));
    write_query(out, 3, &a.query, &a.variable);
    line(out, 2, "</QUERY>");
    if let Some(m) = &a.membership {
        line(out, 2, "<MEMBERSHIP>");
        for (x, y) in m.points() {
            let mut p = String::new();
            let _ = write!(p, "<POINT X=\"{x}\" Y=\"{y}\"/>");
            line(out, 3, &p);
        }
        line(out, 2, "</MEMBERSHIP>");
    }
    line(out, 1, "</ATTRIBUTE>");
}

pub fn write_collection(c: &CollectionDoc) -> String {
    let mut out = String::new();
    line(&mut out, 0, &format!("<COLLECTION KIND=\"{}\" SCOPE=\"{}\">", esc(&c.kind), esc(&c.scope)));
    line(&mut out, 1, &format!("<USES ONTOLOGY=\"{}\" VERSION=\"{}\"/>", esc(&c.ontology), esc(&c.version)));
    for a in &c.attributes {
        write_attribute(&mut out, a);
    }
    line(&mut out, 0, "</COLLECTION>");
    out
}
