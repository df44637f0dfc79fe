use super::{FiniteTree, Node};
use crate::error::{Error, Result};

fn form_at(t: &FiniteTree, node: &Node) -> String {
    let mut kids: Vec<String> = t.children(node).map(|c| form_at(t, c)).collect();
    kids.sort_unstable();
    let mut out = String::with_capacity(2 + kids.iter().map(String::len).sum::<usize>());
    out.push('(');
    for k in &kids {
        out.push_str(k);
    }
    out.push(')');
    out
}

/// Label-independent encoding: each node becomes `(` followed by its
/// children's forms in sorted order and `)`. Two rooted trees are isomorphic
/// exactly when their forms are equal. The empty tree has the empty form.
pub fn canonical_form(t: &FiniteTree) -> String {
    if t.is_empty() {
        return String::new();
    }
    form_at(t, &Vec::new())
}

pub fn tree_isomorphic(a: &FiniteTree, b: &FiniteTree) -> bool {
    canonical_form(a) == canonical_form(b)
}

fn rank_at(t: &FiniteTree, node: &Node) -> usize {
    t.children(node).map(|c| rank_at(t, c) + 1).max().unwrap_or(0)
}

/// Rank of a finite tree: leaves have rank 0 and an inner node one more
/// than the largest rank among its children. Equals the height.
pub fn finite_tree_rank(t: &FiniteTree) -> Result<usize> {
    if t.is_empty() {
        return Err(Error::EmptyTree);
    }
    Ok(rank_at(t, &Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms_ignore_labels() {
        let a = FiniteTree::closure_of([vec![0, 0], vec![1]]);
        let b = FiniteTree::closure_of([vec![3], vec![7, 2]]);
        assert!(tree_isomorphic(&a, &b));
        assert_eq!(canonical_form(&a), "((())())");
        let c = FiniteTree::closure_of([vec![0], vec![1], vec![2]]);
        assert!(!tree_isomorphic(&a, &c));
        assert!(tree_isomorphic(&FiniteTree::default(), &FiniteTree::default()));
    }

    #[test]
    fn ranks() {
        assert!(matches!(finite_tree_rank(&FiniteTree::default()), Err(Error::EmptyTree)));
        assert_eq!(finite_tree_rank(&FiniteTree::chain(0)).unwrap(), 0);
        assert_eq!(finite_tree_rank(&FiniteTree::chain(4)).unwrap(), 4);
        assert_eq!(finite_tree_rank(&FiniteTree::star(5)).unwrap(), 1);
    }
}
