//! Balls in right Cayley digraphs.

use std::collections::HashMap;

use super::presentation::Word;
use super::rewrite::RewriteSystem;
use crate::digraph::{DiGraph, Vertex};
use crate::embedding::PartialSelfEmbedding;
use crate::error::Result;
use crate::exec::par_map;

/// Elements of word length `≤ radius`, with edges `m → nf(ms)` inside the ball.
///
/// Vertex `i` of the digraph is `elements[i]`; elements are in breadth-first
/// order (by length, then discovery). Elements of length `radius` are marked
/// as frontier since some of their products may leave the ball.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    radius: u32,
    elements: Vec<Word>,
    lengths: Vec<u32>,
    index: HashMap<Word, Vertex>,
    digraph: DiGraph,
    rs: RewriteSystem,
}

impl CayleyBall {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn elements(&self) -> &[Word] {
        &self.elements
    }

    /// Word length `ℓ_A` of each element.
    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn digraph(&self) -> &DiGraph {
        &self.digraph
    }

    pub fn into_digraph(self) -> DiGraph {
        self.digraph
    }

    pub fn rewrite_system(&self) -> &RewriteSystem {
        &self.rs
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The vertex of the normal form of `w`, if it lies in the ball.
    pub fn vertex_of(&self, w: &[u16]) -> Result<Option<Vertex>> {
        let nf = self.rs.normal_form(w)?;
        Ok(self.index.get(&nf).copied())
    }

    pub fn word(&self, v: Vertex) -> &Word {
        &self.elements[v.index()]
    }
}

/// Breadth-first closure of the identity under right multiplication by generators.
pub fn cayley_ball(rs: &RewriteSystem, radius: u32) -> Result<CayleyBall> {
    rs.normal_form(&[])?;
    let gens = rs.generators().len() as u16;
    let mut elements: Vec<Word> = vec![Word::new()];
    let mut lengths = vec![0u32];
    let mut index: HashMap<Word, Vertex> = HashMap::new();
    index.insert(Word::new(), Vertex::from_index(0));
    let mut level: Vec<usize> = vec![0];
    // products[i][s] = nf(elements[i] · s)
    let mut products: Vec<Vec<Word>> = Vec::new();
    for t in 0..=radius {
        let words: Vec<Word> = level.iter().map(|&i| elements[i].clone()).collect();
        let prods = par_map(&words, |m| {
            (0..gens)
                .map(|s| {
                    let mut w = m.clone();
                    w.push(s);
                    rs.normal_form(&w).expect("checked usable")
                })
                .collect::<Vec<Word>>()
        });
        let mut next = Vec::new();
        for ps in &prods {
            if t == radius {
                break;
            }
            for p in ps {
                if !index.contains_key(p) {
                    let v = Vertex::from_index(elements.len());
                    index.insert(p.clone(), v);
                    elements.push(p.clone());
                    lengths.push(t + 1);
                    next.push(v.index());
                }
            }
        }
        products.extend(prods);
        level = next;
        if level.is_empty() {
            break;
        }
    }
    let mut d = DiGraph::new();
    for e in &elements {
        d.add_vertex(rs.format_word(e))?;
    }
    for (i, ps) in products.iter().enumerate() {
        let m = Vertex::from_index(i);
        for p in ps {
            if let Some(&v) = index.get(p) {
                if !d.has_edge(m, v) {
                    d.add_edge(m, v)?;
                }
            }
        }
    }
    d.set_root(Vertex::from_index(0))?;
    for (i, &l) in lengths.iter().enumerate() {
        if l == radius {
            d.mark_frontier(Vertex::from_index(i))?;
        }
    }
    d.set_window_note(format!("right Cayley ball of radius {radius}"));
    Ok(CayleyBall {
        radius,
        elements,
        lengths,
        index,
        digraph: d,
        rs: rs.clone(),
    })
}

/// `x ↦ nf(m·x)` on the elements whose image stays in the ball.
pub fn left_mul_embedding(b: &CayleyBall, m: &[u16]) -> Result<PartialSelfEmbedding> {
    let mut pairs = Vec::new();
    let mut trimmed = Vec::new();
    for (i, x) in b.elements.iter().enumerate() {
        let mut w = m.to_vec();
        w.extend_from_slice(x);
        match b.vertex_of(&w)? {
            Some(v) => pairs.push((Vertex::from_index(i), v)),
            None => trimmed.push(Vertex::from_index(i)),
        }
    }
    Ok(PartialSelfEmbedding::from_pairs(Vertex::from_index(0), pairs).with_trimmed(trimmed))
}

/// Cancellation failures found in the ball; `None` means the side passed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellativityReport {
    /// `(x, y, s)` with `s·x = s·y` and `x ≠ y`.
    pub left: Option<(Word, Word, Word)>,
    /// `(x, y, s)` with `x·s = y·s` and `x ≠ y`.
    pub right: Option<(Word, Word, Word)>,
}

/// Checks left and right cancellation by generators over all ball elements.
///
/// A witness names the later element first and the earlier one it collides with.
pub fn cancellativity_window(b: &CayleyBall) -> Result<CancellativityReport> {
    let gens = b.rs.generators().len() as u16;
    let mut left = None;
    let mut right = None;
    for s in 0..gens {
        let mut seen_r: HashMap<Word, usize> = HashMap::new();
        let mut seen_l: HashMap<Word, usize> = HashMap::new();
        for (i, x) in b.elements.iter().enumerate() {
            let mut xs = x.clone();
            xs.push(s);
            let xs = b.rs.normal_form(&xs)?;
            if let Some(&j) = seen_r.get(&xs) {
                right.get_or_insert_with(|| (x.clone(), b.elements[j].clone(), vec![s]));
            } else {
                seen_r.insert(xs, i);
            }
            let mut sx = vec![s];
            sx.extend_from_slice(x);
            let sx = b.rs.normal_form(&sx)?;
            if let Some(&j) = seen_l.get(&sx) {
                left.get_or_insert_with(|| (x.clone(), b.elements[j].clone(), vec![s]));
            } else {
                seen_l.insert(sx, i);
            }
        }
    }
    Ok(CancellativityReport { left, right })
}
