//! Word-level straightening used as an independent reference for the memoized product.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Enveloping, PbwMonomial, UEnvElement};
use crate::error::{Error, Result};
use crate::grassmann::GrassmannElement;
use crate::scalar::{sign, Scalar};

/// Which out-of-order adjacent pair to rewrite first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RewriteOrder {
    Leftmost,
    Rightmost,
}

/// Normalizes `coeff ⊗ z_{w_1} ... z_{w_k}` by repeatedly rewriting adjacent letter pairs.
pub fn pbw_normalize(
    env: &Arc<Enveloping>,
    coeff: &GrassmannElement,
    word: &[usize],
    order: RewriteOrder,
) -> Result<UEnvElement> {
    let g = env.lie();
    let d = g.dim();
    let m = g.even_dim();
    let f = g.field();
    if let Some(bad) = word.iter().find(|&&l| l >= d) {
        return Err(Error::Dimension(format!("letter {bad} outside a {d}-dimensional basis")));
    }
    let mut pending: HashMap<Vec<usize>, Scalar> = HashMap::from([(word.to_vec(), f.one())]);
    let mut out = UEnvElement::zero(env, coeff.algebra());
    while let Some(w) = pending.keys().next().cloned() {
        let c = pending.remove(&w).expect("present");
        if c.is_zero() {
            continue;
        }
        let violations: Vec<usize> = (0..w.len().saturating_sub(1))
            .filter(|&p| !env.letter_in_order(w[p], w[p + 1]))
            .collect();
        let Some(&p) = (match order {
            RewriteOrder::Leftmost => violations.first(),
            RewriteOrder::Rightmost => violations.last(),
        }) else {
            out.add_term(word_to_monomial(m, &w), &coeff.scale(&c));
            continue;
        };
        let (a, b) = (w[p], w[p + 1]);
        let mut push = |new: Vec<usize>, k: Scalar| {
            if k.is_zero() {
                return;
            }
            let e = pending.entry(new).or_insert_with(|| f.zero());
            *e += &k;
        };
        let splice = |middle: &[usize]| {
            let mut v = w[..p].to_vec();
            v.extend_from_slice(middle);
            v.extend_from_slice(&w[p + 2..]);
            v
        };
        if a == b {
            for (e, x) in g.two_op_basis(a - m).iter().enumerate() {
                push(splice(&[e]), &c * x);
            }
            continue;
        }
        let s = sign(f, g.parity(a).koszul(g.parity(b)));
        push(splice(&[b, a]), &c * &s);
        for (k, x) in g.bracket_basis(a, b).iter().enumerate() {
            push(splice(&[k]), &c * x);
        }
    }
    Ok(out)
}

fn word_to_monomial(even_dim: usize, w: &[usize]) -> PbwMonomial {
    let mut mono = PbwMonomial::one(even_dim);
    for &l in w {
        if l < even_dim {
            mono.even[l] += 1;
        } else {
            mono.odd |= 1u64 << (l - even_dim);
        }
    }
    mono
}
