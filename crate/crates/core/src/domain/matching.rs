//! Face-resolved partition of the boundary into coupling pieces.
//!
//! At each boundary face the coupling is an involution `π` on the neuron
//! indices: neuron `i` exchanges flux with neuron `π(i)` there, and `π(i) = i`
//! means a zero-flux face for `i`. Being an involution is exactly the
//! requirement that the piece shared by `i` and `j` is the same set for both.

use serde::{Deserialize, Serialize};

use super::{Domain, Side};
use crate::error::MatchingError;

/// A configured boundary segment and the pairs coupled on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    /// `left`/`right` (x axis) or `bottom`/`top` (y axis, 2D only).
    pub side: String,
    /// Arc-length interval `[start, end)` along the side; whole side if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
    /// 1-based pair list such as `"(1,2),(3,3)"`.
    pub pairs: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryMatching {
    n: usize,
    /// `images[face * n + i]` is the 0-based partner of neuron `i` at `face`.
    images: Vec<usize>,
}

impl BoundaryMatching {
    /// Every face zero-flux for every neuron.
    pub fn uncoupled(domain: &Domain, n: usize) -> Self {
        let faces = domain.boundary_faces().len();
        Self {
            n,
            images: (0..faces).flat_map(|_| 0..n).collect(),
        }
    }

    /// The same involution on every face.
    pub fn uniform(domain: &Domain, perm: &[usize]) -> Result<Self, MatchingError> {
        check_involution(perm)?;
        let faces = domain.boundary_faces().len();
        Ok(Self {
            n: perm.len(),
            images: (0..faces).flat_map(|_| perm.iter().copied()).collect(),
        })
    }

    /// Builds a matching from one involution per face.
    pub fn from_faces(domain: &Domain, per_face: Vec<Vec<usize>>) -> Result<Self, MatchingError> {
        let faces = domain.boundary_faces().len();
        if per_face.len() != faces {
            return Err(MatchingError::FaceCount {
                expected: faces,
                got: per_face.len(),
            });
        }
        let n = per_face.first().map_or(0, Vec::len);
        let mut images = Vec::with_capacity(faces * n);
        for perm in &per_face {
            if perm.len() != n {
                return Err(MatchingError::Syntax {
                    text: format!("{perm:?}"),
                    reason: format!("expected {n} images"),
                });
            }
            check_involution(perm)?;
            images.extend_from_slice(perm);
        }
        Ok(Self { n, images })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_faces(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.images.len() / self.n
        }
    }

    #[inline]
    pub fn partner(&self, face: usize, neuron: usize) -> usize {
        self.images[face * self.n + neuron]
    }

    pub fn face_images(&self, face: usize) -> &[usize] {
        &self.images[face * self.n..(face + 1) * self.n]
    }

    /// The same matching with neurons relabeled by `relabel[old] = new`.
    pub fn relabeled(&self, relabel: &[usize]) -> Self {
        let mut images = vec![0; self.images.len()];
        for face in 0..self.n_faces() {
            for old in 0..self.n {
                let partner = self.partner(face, old);
                images[face * self.n + relabel[old]] = relabel[partner];
            }
        }
        Self { n: self.n, images }
    }

    /// Whether neurons `i != j` share at least one face.
    pub fn couples(&self, i: usize, j: usize) -> bool {
        i != j && (0..self.n_faces()).any(|f| self.partner(f, i) == j)
    }
}

fn check_involution(perm: &[usize]) -> Result<(), MatchingError> {
    let n = perm.len();
    for (i, &j) in perm.iter().enumerate() {
        if j >= n {
            return Err(MatchingError::IndexOutOfRange { index: j + 1, n });
        }
        if perm[j] != i {
            return Err(MatchingError::NotInvolution {
                neuron: j + 1,
                first: i + 1,
                second: perm[j] + 1,
            });
        }
    }
    Ok(())
}

/// Parses a 1-based pair list like `"(1,2),(3,3)"` into a 0-based involution
/// on `n` neurons. Indices not mentioned map to themselves.
pub fn parse_pairs(text: &str, n: usize) -> Result<Vec<usize>, MatchingError> {
    let syntax = |reason: &str| MatchingError::Syntax {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let mut perm: Vec<Option<usize>> = vec![None; n];
    let mut rest = text.trim();
    while !rest.is_empty() {
        rest = rest
            .strip_prefix('(')
            .ok_or_else(|| syntax("expected `(`"))?;
        let close = rest.find(')').ok_or_else(|| syntax("missing `)`"))?;
        let inner = &rest[..close];
        rest = rest[close + 1..].trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(syntax("trailing comma"));
            }
        } else if !rest.is_empty() {
            return Err(syntax("expected `,` between pairs"));
        }

        let mut parts = inner.split(',');
        let mut index = || -> Result<usize, MatchingError> {
            let token = parts.next().ok_or_else(|| syntax("pair needs two indices"))?;
            let k: usize = token
                .trim()
                .parse()
                .map_err(|_| syntax(&format!("`{}` is not an index", token.trim())))?;
            if k == 0 || k > n {
                return Err(MatchingError::IndexOutOfRange { index: k, n });
            }
            Ok(k - 1)
        };
        let i = index()?;
        let j = index()?;
        if parts.next().is_some() {
            return Err(syntax("pair has more than two indices"));
        }
        for (a, b) in [(i, j), (j, i)] {
            match perm[a] {
                Some(existing) if existing != b => {
                    return Err(MatchingError::NotInvolution {
                        neuron: a + 1,
                        first: existing + 1,
                        second: b + 1,
                    })
                }
                _ => perm[a] = Some(b),
            }
        }
    }
    Ok(perm
        .into_iter()
        .enumerate()
        .map(|(i, image)| image.unwrap_or(i))
        .collect())
}

fn parse_side(side: &str, dim: usize) -> Result<(usize, Side), MatchingError> {
    let parsed = match side.trim().to_ascii_lowercase().as_str() {
        "left" | "x-low" | "low" => (0, Side::Low),
        "right" | "x-high" | "high" => (0, Side::High),
        "bottom" | "y-low" if dim == 2 => (1, Side::Low),
        "top" | "y-high" if dim == 2 => (1, Side::High),
        _ => {
            return Err(MatchingError::BadSide {
                side: side.to_string(),
                dim,
            })
        }
    };
    Ok(parsed)
}

/// Resolves configured segments onto the faces of `domain`. Faces covered by
/// no segment are zero-flux for every neuron; a face covered twice is an error.
pub fn parse_matching(
    segments: &[Segment],
    domain: &Domain,
    n: usize,
) -> Result<BoundaryMatching, MatchingError> {
    let faces = domain.boundary_faces();
    let mut owner: Vec<Option<usize>> = vec![None; faces.len()];
    let mut per_face: Vec<Vec<usize>> = vec![(0..n).collect(); faces.len()];

    for (s, segment) in segments.iter().enumerate() {
        let (axis, side) = parse_side(&segment.side, domain.dim())?;
        let perm = parse_pairs(&segment.pairs, n)?;
        let length = if domain.dim() == 2 {
            domain.extents()[1 - axis]
        } else {
            0.0
        };
        let (start, end) = match (domain.dim(), segment.interval) {
            (_, None) => (f64::NEG_INFINITY, f64::INFINITY),
            (1, Some([a, b])) => {
                return Err(MatchingError::BadInterval {
                    side: segment.side.clone(),
                    start: a,
                    end: b,
                    length,
                })
            }
            (_, Some([a, b])) => {
                if !(a < b && a >= 0.0 && b <= length) {
                    return Err(MatchingError::BadInterval {
                        side: segment.side.clone(),
                        start: a,
                        end: b,
                        length,
                    });
                }
                (a, b)
            }
        };
        for (f, face) in faces.iter().enumerate() {
            if face.axis != axis || face.side != side {
                continue;
            }
            if face.offset < start || face.offset >= end {
                continue;
            }
            if let Some(first) = owner[f] {
                return Err(MatchingError::Overlap {
                    first: first + 1,
                    second: s + 1,
                    face: f,
                });
            }
            owner[f] = Some(s);
            per_face[f] = perm.clone();
        }
    }
    BoundaryMatching::from_faces(domain, per_face)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSpec;

    fn seg(side: &str, interval: Option<[f64; 2]>, pairs: &str) -> Segment {
        Segment {
            side: side.into(),
            interval,
            pairs: pairs.into(),
        }
    }

    #[test]
    fn pairs_parse() {
        assert_eq!(parse_pairs("(1,2)", 2).unwrap(), vec![1, 0]);
        assert_eq!(parse_pairs(" (1, 2), (3,3) ", 4).unwrap(), vec![1, 0, 2, 3]);
        assert_eq!(parse_pairs("", 3).unwrap(), vec![0, 1, 2]);
        assert!(matches!(
            parse_pairs("(1,2),(2,3)", 3),
            Err(MatchingError::NotInvolution { .. })
        ));
        assert!(matches!(
            parse_pairs("(1,4)", 3),
            Err(MatchingError::IndexOutOfRange { index: 4, n: 3 })
        ));
        assert!(matches!(parse_pairs("(1,2", 3), Err(MatchingError::Syntax { .. })));
        assert!(matches!(parse_pairs("(1,2,3)", 3), Err(MatchingError::Syntax { .. })));
        // repeating a pair is harmless
        assert_eq!(parse_pairs("(1,2),(2,1)", 2).unwrap(), vec![1, 0]);
    }

    #[test]
    fn interval_both_endpoints_swap() {
        let d = Domain::build(&DomainSpec::interval(1.0, 10)).unwrap();
        let m = parse_matching(&[seg("left", None, "(1,2)"), seg("right", None, "(1,2)")], &d, 2)
            .unwrap();
        for f in 0..2 {
            assert_eq!(m.face_images(f), &[1, 0]);
        }
    }

    #[test]
    fn rectangle_gaps_are_fixed_points() {
        let d = Domain::build(&DomainSpec::rectangle(1.0, 1.0, 8, 8)).unwrap();
        let m = parse_matching(&[seg("left", None, "(1,2)"), seg("right", None, "(2,3)")], &d, 3)
            .unwrap();
        for (f, face) in d.boundary_faces().iter().enumerate() {
            let expected: &[usize] = match (face.axis, face.side) {
                (0, Side::Low) => &[1, 0, 2],
                (0, Side::High) => &[0, 2, 1],
                _ => &[0, 1, 2],
            };
            assert_eq!(m.face_images(f), expected);
        }
    }

    #[test]
    fn partial_segments_and_overlap() {
        let d = Domain::build(&DomainSpec::rectangle(2.0, 1.0, 8, 4)).unwrap();
        let m = parse_matching(&[seg("bottom", Some([0.0, 1.0]), "(1,2)")], &d, 2).unwrap();
        let coupled = d
            .boundary_faces()
            .iter()
            .enumerate()
            .filter(|(f, _)| m.partner(*f, 0) == 1)
            .count();
        assert_eq!(coupled, 4);

        let overlap = parse_matching(
            &[
                seg("bottom", Some([0.0, 1.0]), "(1,2)"),
                seg("bottom", Some([0.5, 2.0]), "(1,2)"),
            ],
            &d,
            2,
        );
        assert!(matches!(overlap, Err(MatchingError::Overlap { .. })));
        assert!(matches!(
            parse_matching(&[seg("bottom", Some([0.0, 3.0]), "(1,2)")], &d, 2),
            Err(MatchingError::BadInterval { .. })
        ));
    }

    #[test]
    fn side_names_depend_on_dim() {
        let d = Domain::build(&DomainSpec::interval(1.0, 10)).unwrap();
        assert!(matches!(
            parse_matching(&[seg("top", None, "(1,2)")], &d, 2),
            Err(MatchingError::BadSide { .. })
        ));
    }

    #[test]
    fn relabeling_keeps_involution() {
        let d = Domain::build(&DomainSpec::interval(1.0, 10)).unwrap();
        let m = parse_matching(&[seg("left", None, "(1,2)"), seg("right", None, "(2,3)")], &d, 3)
            .unwrap();
        let r = m.relabeled(&[2, 0, 1]);
        // old (1,2) on the left becomes (3,1)
        assert_eq!(r.face_images(0), &[2, 1, 0]);
        assert!(BoundaryMatching::from_faces(&d, vec![r.face_images(0).to_vec(), r.face_images(1).to_vec()]).is_ok());
    }
}
