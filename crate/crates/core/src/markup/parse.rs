use std::collections::BTreeSet;

use roxmltree::{Document, Node};

use super::{AttributeDecl, CollectionDoc, FunctionSchema, MarkupError, OntologyDoc, ScaleDecl};
use crate::scales::{AbstractScale, Constant, Implication, Order, PiecewiseLinear, Query};

fn pos(node: Node) -> String {
    let p = node.document().text_pos_at(node.range().start);
    format!("line {}:{}", p.row, p.col)
}

fn describe(node: Node) -> String {
    if node.is_element() {
        format!("<{}>", node.tag_name().name())
    } else {
        format!("text `{}`", node.text().unwrap_or_default().trim())
    }
}

/// Element children; comments, processing instructions and blank text
/// are skipped, anything else is an error.
fn children<'a, 'i>(node: Node<'a, 'i>) -> Result<Vec<Node<'a, 'i>>, MarkupError> {
    let mut out = Vec::new();
    for c in node.children() {
        if c.is_element() {
            out.push(c);
        } else if c.is_text() && !c.text().unwrap_or_default().trim().is_empty() {
            return Err(MarkupError::Unexpected {
                pos: pos(c),
                expected: format!("elements inside <{}>", node.tag_name().name()),
                found: describe(c),
            });
        }
    }
    Ok(out)
}

fn expect_tag(node: Node, tags: &[&str]) -> Result<(), MarkupError> {
    if tags.contains(&node.tag_name().name()) {
        Ok(())
    } else {
        let expected = tags.iter().map(|t| format!("<{t}>")).collect::<Vec<_>>().join(" or ");
        Err(MarkupError::Unexpected { pos: pos(node), expected, found: describe(node) })
    }
}

fn attr(node: Node, name: &str) -> Result<String, MarkupError> {
    node.attribute(name).map(str::to_string).ok_or_else(|| MarkupError::MissingAttribute {
        pos: pos(node),
        element: node.tag_name().name().to_string(),
        attribute: name.to_string(),
    })
}

fn invalid(node: Node, message: impl Into<String>) -> MarkupError {
    MarkupError::Invalid { pos: pos(node), message: message.into() }
}

fn root(doc: &Document, tag: &str) -> Result<(), MarkupError> {
    expect_tag(doc.root_element(), &[tag])
}

fn term_list(node: Node) -> Result<Vec<String>, MarkupError> {
    children(node)?
        .into_iter()
        .map(|t| {
            expect_tag(t, &["TERM"])?;
            attr(t, "NAME")
        })
        .collect()
}

fn parse_implication(node: Node) -> Result<Implication, MarkupError> {
    let parts = children(node)?;
    let (premise, conclusion) = match parts.as_slice() {
        [i] => {
            expect_tag(*i, &["IF"])?;
            (term_list(*i)?, Vec::new())
        }
        [i, t] => {
            expect_tag(*i, &["IF"])?;
            expect_tag(*t, &["THEN"])?;
            (term_list(*i)?, term_list(*t)?)
        }
        _ => return Err(invalid(node, "IMPLICATION needs IF and an optional THEN")),
    };
    Ok(Implication { premise, conclusion })
}

fn parse_scale(node: Node) -> Result<ScaleDecl, MarkupError> {
    let name = attr(node, "NAME")?;
    let category = attr(node, "CATEGORY")?;
    let mut terms = Vec::new();
    let mut basis = Vec::new();
    for c in children(node)? {
        expect_tag(c, &["TERM", "IMPLICATION"])?;
        if c.tag_name().name() == "TERM" {
            if !basis.is_empty() {
                return Err(invalid(c, "TERM after IMPLICATION"));
            }
            let t = attr(c, "NAME")?;
            if terms.contains(&t) {
                return Err(MarkupError::Duplicate { what: "term", name: t });
            }
            terms.push(t);
        } else {
            let imp = parse_implication(c)?;
            if let Some(t) = imp.premise.iter().chain(&imp.conclusion).find(|t| !terms.contains(t)) {
                return Err(MarkupError::UndeclaredTerm { scale: name, term: t.clone() });
            }
            basis.push(imp);
        }
    }
    Ok(ScaleDecl { category, scale: AbstractScale::new(name, terms, basis)? })
}

/// Reads an `ONTOLOGY` document.
pub fn parse_ontology(text: &str) -> Result<OntologyDoc, MarkupError> {
    let doc = Document::parse(text).map_err(|e| MarkupError::Xml(e.to_string()))?;
    root(&doc, "ONTOLOGY")?;
    let r = doc.root_element();
    let mut onto = OntologyDoc {
        name: attr(r, "NAME")?,
        version: attr(r, "VERSION")?,
        categories: Vec::new(),
        functions: Vec::new(),
        scales: Vec::new(),
    };
    for c in children(r)? {
        expect_tag(c, &["CATEGORY", "FNSCHEMA", "SCALE"])?;
        match c.tag_name().name() {
            "CATEGORY" => {
                let name = attr(c, "NAME")?;
                if onto.categories.contains(&name) {
                    return Err(MarkupError::Duplicate { what: "category", name });
                }
                onto.categories.push(name);
            }
            "FNSCHEMA" => {
                let name = attr(c, "NAME")?;
                if onto.functions.iter().any(|f| f.name == name) {
                    return Err(MarkupError::Duplicate { what: "function", name });
                }
                let values = children(c)?
                    .into_iter()
                    .map(|v| {
                        expect_tag(v, &["VALUE"])?;
                        attr(v, "NAME")
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                onto.functions.push(FunctionSchema {
                    name,
                    arg_type: attr(c, "ARGTYPE")?,
                    image_type: attr(c, "IMAGETYPE")?.parse()?,
                    values,
                });
            }
            _ => {
                let decl = parse_scale(c)?;
                if onto.scales.iter().any(|s| s.scale.name() == decl.scale.name()) {
                    return Err(MarkupError::Duplicate { what: "scale", name: decl.scale.name().to_string() });
                }
                onto.scales.push(decl);
            }
        }
    }
    let known: BTreeSet<&String> = onto.categories.iter().collect();
    let used = onto.functions.iter().map(|f| &f.arg_type).chain(onto.scales.iter().map(|s| &s.category));
    for category in used {
        if !known.contains(category) {
            return Err(MarkupError::UnknownCategory(category.clone()));
        }
    }
    Ok(onto)
}

fn parse_query(node: Node, variable: &str, onto: &OntologyDoc) -> Result<Query, MarkupError> {
    expect_tag(node, &["FN2REL", "AND", "OR", "NOT"])?;
    let sub = |n: Node| -> Result<Vec<Query>, MarkupError> {
        children(n)?.into_iter().map(|c| parse_query(c, variable, onto)).collect()
    };
    Ok(match node.tag_name().name() {
        "AND" => Query::And(sub(node)?),
        "OR" => Query::Or(sub(node)?),
        "NOT" => {
            let mut qs = sub(node)?;
            if qs.len() != 1 {
                return Err(invalid(node, "NOT takes exactly one query"));
            }
            qs.pop().expect("one query").negate()
        }
        _ => {
            let function = attr(node, "NAME")?;
            let order: Order = attr(node, "ORDER")?.parse()?;
            let schema = onto.function(&function)?;
            let args = children(node)?
                .into_iter()
                .map(|a| {
                    expect_tag(a, &["ARGUMENT"])?;
                    attr(a, "VALUE")
                })
                .collect::<Result<Vec<_>, _>>()?;
            let [subject, constant] = args.as_slice() else {
                return Err(invalid(node, "FN2REL takes two ARGUMENTs"));
            };
            if subject != variable {
                return Err(invalid(node, format!("first ARGUMENT must be the query variable `{variable}`")));
            }
            Query::Compare { function, order, constant: Constant::parse(constant, schema.image_type)? }
        }
    })
}

fn parse_membership(node: Node) -> Result<PiecewiseLinear, MarkupError> {
    let points = children(node)?
        .into_iter()
        .map(|p| {
            expect_tag(p, &["POINT"])?;
            let coord = |name: &str| -> Result<f64, MarkupError> {
                let text = attr(p, name)?;
                text.trim().parse().map_err(|_| invalid(p, format!("{name}=`{text}` is not a number")))
            };
            Ok((coord("X")?, coord("Y")?))
        })
        .collect::<Result<Vec<_>, MarkupError>>()?;
    PiecewiseLinear::new(points).map_err(|m| invalid(node, m))
}

fn parse_attribute(node: Node, onto: &OntologyDoc) -> Result<AttributeDecl, MarkupError> {
    let scale = attr(node, "SCALE")?;
    let key = attr(node, "KEY")?;
    let decl = onto.scale(&scale)?;
    if decl.scale.term_index(&key).is_err() {
        return Err(MarkupError::UndeclaredTerm { scale, term: key });
    }
    let parts = children(node)?;
    let (q, membership) = match parts.as_slice() {
        [q] => (*q, None),
        [q, m] => {
            expect_tag(*m, &["MEMBERSHIP"])?;
            (*q, Some(parse_membership(*m)?))
        }
        _ => return Err(invalid(node, "ATTRIBUTE needs a QUERY and an optional MEMBERSHIP")),
    };
    expect_tag(q, &["QUERY"])?;
    let variable = attr(q, "VARIABLE")?;
    let category = attr(q, "CATEGORY")?;
    let mut parts = children(q)?.into_iter().map(|c| parse_query(c, &variable, onto)).collect::<Result<Vec<_>, _>>()?;
    let query = match parts.len() {
        0 => return Err(invalid(q, "QUERY is empty")),
        1 => parts.pop().expect("one query"),
        _ => Query::And(parts),
    };
    Ok(AttributeDecl { scale, key, variable, category, query, membership })
}

/// Reads a `COLLECTION` document against the ontology it uses.
pub fn parse_collection(text: &str, onto: &OntologyDoc) -> Result<CollectionDoc, MarkupError> {
    let doc = Document::parse(text).map_err(|e| MarkupError::Xml(e.to_string()))?;
    root(&doc, "COLLECTION")?;
    let r = doc.root_element();
    let parts = children(r)?;
    let Some((uses, rest)) = parts.split_first() else {
        return Err(invalid(r, "COLLECTION needs a USES element"));
    };
    expect_tag(*uses, &["USES"])?;
    let (ontology, version) = (attr(*uses, "ONTOLOGY")?, attr(*uses, "VERSION")?);
    if ontology != onto.name || version != onto.version {
        return Err(MarkupError::OntologyMismatch {
            expected: format!("{ontology} {version}"),
            found: format!("{} {}", onto.name, onto.version),
        });
    }
    let mut attributes: Vec<AttributeDecl> = Vec::new();
    for c in rest {
        expect_tag(*c, &["ATTRIBUTE"])?;
        let a = parse_attribute(*c, onto)?;
        if attributes.iter().any(|b| b.scale == a.scale && b.key == a.key) {
            return Err(MarkupError::Duplicate { what: "attribute", name: format!("{}.{}", a.scale, a.key) });
        }
        attributes.push(a);
    }
    Ok(CollectionDoc { kind: attr(r, "KIND")?, scope: attr(r, "SCOPE")?, ontology, version, attributes })
}
