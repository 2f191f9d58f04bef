/// Preorder layout of a rooted tree in which the root has `root_arity`
/// children, every other vertex above `depth` has `inner_arity` children,
/// and all leaves sit at `depth`.
///
/// Position 0 is the root; the subtree of position `v` occupies the
/// contiguous range `v..end(v)`. Balls of `T_d` are `Layout::ball(d, t)`;
/// the half of an edge ball hanging off one endpoint is `Layout::new(d-1, d-1, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    root_arity: usize,
    inner_arity: usize,
    depth: usize,
    children: Vec<Vec<usize>>,
    end: Vec<usize>,
    level: Vec<usize>,
    prev_sibling: Vec<Option<usize>>,
}

impl Layout {
    pub fn new(root_arity: usize, inner_arity: usize, depth: usize) -> Self {
        let size = Self::tree_size(root_arity, inner_arity, depth);
        let mut layout = Layout {
            root_arity,
            inner_arity,
            depth,
            children: vec![Vec::new(); size],
            end: vec![0; size],
            level: vec![0; size],
            prev_sibling: vec![None; size],
        };
        let mut next = 0;
        layout.place(&mut next, 0);
        debug_assert_eq!(next, size);
        layout
    }

    pub fn ball(d: usize, t: usize) -> Self {
        Self::new(d, d.saturating_sub(1), t)
    }

    fn place(&mut self, next: &mut usize, level: usize) -> usize {
        let v = *next;
        *next += 1;
        self.level[v] = level;
        if level < self.depth {
            let arity = if level == 0 { self.root_arity } else { self.inner_arity };
            let mut prev = None;
            for _ in 0..arity {
                let c = self.place(next, level + 1);
                self.prev_sibling[c] = prev;
                prev = Some(c);
                self.children[v].push(c);
            }
        }
        self.end[v] = *next;
        v
    }

    pub fn tree_size(root_arity: usize, inner_arity: usize, depth: usize) -> usize {
        if depth == 0 {
            return 1;
        }
        let mut size = 1;
        let mut layer = root_arity;
        for _ in 0..depth {
            size += layer;
            layer *= inner_arity;
        }
        size
    }

    pub fn size(&self) -> usize {
        self.end.len()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn root_arity(&self) -> usize {
        self.root_arity
    }

    pub fn inner_arity(&self) -> usize {
        self.inner_arity
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn end(&self, v: usize) -> usize {
        self.end[v]
    }

    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    pub fn prev_sibling(&self, v: usize) -> Option<usize> {
        self.prev_sibling[v]
    }

    /// Canonical code of a per-position labeling with `width` bytes per
    /// vertex: the vertex's bytes followed by its children's codes in
    /// sorted order.
    pub fn canonical_code(&self, bytes: &[u8], width: usize) -> Vec<u8> {
        debug_assert_eq!(bytes.len(), self.size() * width);
        let mut out = Vec::with_capacity(bytes.len());
        self.code_into(0, bytes, width, &mut out);
        out
    }

    fn code_into(&self, v: usize, bytes: &[u8], width: usize, out: &mut Vec<u8>) {
        out.extend_from_slice(&bytes[v * width..(v + 1) * width]);
        match self.children[v].len() {
            0 => {}
            1 => self.code_into(self.children[v][0], bytes, width, out),
            _ => {
                let mut codes: Vec<Vec<u8>> = self.children[v]
                    .iter()
                    .map(|&c| {
                        let mut sub = Vec::with_capacity((self.end[c] - c) * width);
                        self.code_into(c, bytes, width, &mut sub);
                        sub
                    })
                    .collect();
                codes.sort_unstable();
                for c in codes {
                    out.extend_from_slice(&c);
                }
            }
        }
    }

    /// Number of distinct labelings in the automorphism orbit of a labeling
    /// that is already in canonical arrangement.
    pub fn orbit_size(&self, code: &[u8], width: usize) -> u64 {
        self.orbit_at(0, code, width)
    }

    fn orbit_at(&self, v: usize, code: &[u8], width: usize) -> u64 {
        let kids = &self.children[v];
        let mut orbit: u64 = kids.iter().map(|&c| self.orbit_at(c, code, width)).product();
        // Distinct arrangements of the multiset of child codes.
        let slice = |c: usize| &code[c * width..self.end[c] * width];
        let mut arrangements = factorial(kids.len());
        let mut run = 1;
        for pair in kids.windows(2) {
            if slice(pair[0]) == slice(pair[1]) {
                run += 1;
            } else {
                arrangements /= factorial(run);
                run = 1;
            }
        }
        arrangements /= factorial(run);
        orbit *= arrangements;
        orbit
    }
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}
