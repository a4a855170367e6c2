/// A trie over letter codes with at most one rule id per node.
#[derive(Clone, Debug)]
pub(crate) struct Trie {
    alphabet: usize,
    children: Vec<u32>,
    terminal: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl Trie {
    pub(crate) fn new(alphabet: usize) -> Self {
        Trie {
            alphabet,
            children: vec![NONE; alphabet],
            terminal: vec![NONE],
        }
    }

    pub(crate) const ROOT: u32 = 0;

    #[inline]
    pub(crate) fn child(&self, node: u32, x: u32) -> Option<u32> {
        let c = self.children[node as usize * self.alphabet + x as usize];
        (c != NONE).then_some(c)
    }

    #[inline]
    pub(crate) fn terminal(&self, node: u32) -> Option<usize> {
        let t = self.terminal[node as usize];
        (t != NONE).then_some(t as usize)
    }

    pub(crate) fn insert(&mut self, word: impl Iterator<Item = u32>, id: usize) {
        let mut node = Self::ROOT;
        for x in word {
            node = match self.child(node, x) {
                Some(c) => c,
                None => {
                    let c = self.terminal.len() as u32;
                    self.terminal.push(NONE);
                    self.children
                        .extend(std::iter::repeat_n(NONE, self.alphabet));
                    self.children[node as usize * self.alphabet + x as usize] = c;
                    c
                }
            };
        }
        self.terminal[node as usize] = id as u32;
    }

    pub(crate) fn remove(&mut self, word: impl Iterator<Item = u32>) {
        if let Some(node) = self.walk(word) {
            self.terminal[node as usize] = NONE;
        }
    }

    /// Node reached by reading `word` from the root, if any.
    pub(crate) fn walk(&self, word: impl Iterator<Item = u32>) -> Option<u32> {
        let mut node = Self::ROOT;
        for x in word {
            node = self.child(node, x)?;
        }
        Some(node)
    }

    /// Rule ids strictly below `node`.
    pub(crate) fn below(&self, node: u32, out: &mut Vec<usize>) {
        let mut stack: Vec<u32> = (0..self.alphabet as u32)
            .filter_map(|x| self.child(node, x))
            .collect();
        while let Some(n) = stack.pop() {
            if let Some(t) = self.terminal(n) {
                out.push(t);
            }
            stack.extend((0..self.alphabet as u32).filter_map(|x| self.child(n, x)));
        }
    }
}
