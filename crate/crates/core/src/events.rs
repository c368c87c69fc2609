//! Chronological merge of a pre/post train pair.

use crate::spike::SpikeTrain;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum EventKind {
    Pre,
    Post,
}

/// Iterates both trains in time order, yielding the pre event first when a
/// pre and a post share the same timestamp.
pub(crate) fn merged_events<'a>(
    pre: &'a SpikeTrain,
    post: &'a SpikeTrain,
) -> impl Iterator<Item = (f64, EventKind)> + 'a {
    let (pre, post) = (pre.times(), post.times());
    let (mut i, mut j) = (0usize, 0usize);
    std::iter::from_fn(move || match (pre.get(i), post.get(j)) {
        (Some(&tp), Some(&tq)) if tp <= tq => {
            i += 1;
            Some((tp, EventKind::Pre))
        }
        (_, Some(&tq)) => {
            j += 1;
            Some((tq, EventKind::Post))
        }
        (Some(&tp), None) => {
            i += 1;
            Some((tp, EventKind::Pre))
        }
        (None, None) => None,
    })
}
