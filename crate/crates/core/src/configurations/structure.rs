use std::collections::HashSet;

/// The abstract two-sorted incidence graph of a configuration, with
/// adjacency lists in both directions.
#[derive(Clone, Debug, Default)]
pub struct IncidenceStructure {
    pub n_points: usize,
    pub n_lines: usize,
    /// Lines through each point, ascending.
    pub point_lines: Vec<Vec<usize>>,
    /// Points on each line, ascending.
    pub line_points: Vec<Vec<usize>>,
    edges: HashSet<(usize, usize)>,
}

impl IncidenceStructure {
    pub fn new(
        n_points: usize,
        n_lines: usize,
        incidences: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut point_lines = vec![Vec::new(); n_points];
        let mut line_points = vec![Vec::new(); n_lines];
        let mut edges = HashSet::new();
        for (p, l) in incidences {
            if edges.insert((p, l)) {
                point_lines[p].push(l);
                line_points[l].push(p);
            }
        }
        point_lines.iter_mut().for_each(|v| v.sort_unstable());
        line_points.iter_mut().for_each(|v| v.sort_unstable());
        Self {
            n_points,
            n_lines,
            point_lines,
            line_points,
            edges,
        }
    }

    pub fn is_incident(&self, p: usize, l: usize) -> bool {
        self.edges.contains(&(p, l))
    }

    pub fn n_incidences(&self) -> usize {
        self.edges.len()
    }

    pub fn incidences(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<_> = self.edges.iter().copied().collect();
        v.sort_unstable();
        v
    }

    /// Lines through both `p` and `q`.
    pub fn common_lines(&self, p: usize, q: usize) -> Vec<usize> {
        let (a, b) = (&self.point_lines[p], &self.point_lines[q]);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    /// Keeps the listed points and lines, renumbered in the given order.
    pub fn restrict(&self, keep_points: &[usize], keep_lines: &[usize]) -> IncidenceStructure {
        let mut pmap = vec![usize::MAX; self.n_points];
        keep_points
            .iter()
            .enumerate()
            .for_each(|(new, &old)| pmap[old] = new);
        let mut lmap = vec![usize::MAX; self.n_lines];
        keep_lines
            .iter()
            .enumerate()
            .for_each(|(new, &old)| lmap[old] = new);
        let inc = self
            .edges
            .iter()
            .filter(|(p, l)| pmap[*p] != usize::MAX && lmap[*l] != usize::MAX)
            .map(|(p, l)| (pmap[*p], lmap[*l]));
        IncidenceStructure::new(keep_points.len(), keep_lines.len(), inc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adjacency_and_restriction() {
        let s = IncidenceStructure::new(3, 2, [(0, 0), (1, 0), (1, 1), (2, 1), (1, 1)]);
        assert_eq!(s.n_incidences(), 4);
        assert_eq!(s.point_lines[1], vec![0, 1]);
        assert_eq!(s.common_lines(0, 1), vec![0]);
        assert!(s.common_lines(0, 2).is_empty());
        let r = s.restrict(&[2, 1], &[1]);
        assert_eq!(r.incidences(), vec![(0, 0), (1, 0)]);
    }
}
