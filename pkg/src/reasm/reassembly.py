"""Binary reassembling trees with their alpha-measure and carving conversions.

A reassembling tree is a rooted binary tree whose leaves are the vertices of
the graph; each node stands for the vertex set of its subtree. The boundary
of a node is the number of edges with exactly one endpoint in that set, and
the alpha-measure of a tree is its largest boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Protocol, Sequence

from .errors import Disconnected, InvalidTree, ParseError, TooSmall


class GraphLike(Protocol):
    @property
    def n(self) -> int: ...

    @property
    def edges(self) -> Sequence[tuple[int, int]]: ...


@dataclass(frozen=True)
class ReassemblyTree:
    """Rooted binary tree; ``children[x]`` is ``None`` exactly for leaves."""

    children: tuple[tuple[int, int] | None, ...]
    leaf: tuple[int | None, ...]
    root: int

    @property
    def size(self) -> int:
        return len(self.children)

    def is_leaf(self, x: int) -> bool:
        return self.children[x] is None

    def postorder(self) -> list[int]:
        out: list[int] = []
        stack: list[tuple[int, bool]] = [(self.root, False)]
        while stack:
            x, done = stack.pop()
            ch = self.children[x]
            if done or ch is None:
                out.append(x)
                continue
            stack.append((x, True))
            stack.append((ch[1], False))
            stack.append((ch[0], False))
        return out

    def parents(self) -> dict[int, int]:
        par = {}
        for x, ch in enumerate(self.children):
            if ch is not None:
                for c in ch:
                    par[c] = x
        return par

    def clusters(self) -> dict[int, frozenset[int]]:
        """Vertex set of every node; materialized, so meant for small trees."""
        out: dict[int, frozenset[int]] = {}
        for x in self.postorder():
            ch = self.children[x]
            out[x] = frozenset([self.leaf[x]]) if ch is None else out[ch[0]] | out[ch[1]]
        return out

    def cluster_family(self) -> set[frozenset[int]]:
        return set(self.clusters().values())


class TreeBuilder:
    """Incremental construction of a reassembling tree bottom-up."""

    def __init__(self) -> None:
        self._children: list[tuple[int, int] | None] = []
        self._leaf: list[int | None] = []

    def leaf(self, v: int) -> int:
        self._children.append(None)
        self._leaf.append(v)
        return len(self._children) - 1

    def join(self, a: int, b: int) -> int:
        self._children.append((a, b))
        self._leaf.append(None)
        return len(self._children) - 1

    def build(self, root: int) -> ReassemblyTree:
        return ReassemblyTree(tuple(self._children), tuple(self._leaf), root)


def left_comb(order: Sequence[int]) -> ReassemblyTree:
    """Tree that adds the vertices one at a time in the given order."""
    b = TreeBuilder()
    acc = b.leaf(order[0])
    for v in order[1:]:
        acc = b.join(acc, b.leaf(v))
    return b.build(acc)


def tree_problems(g: GraphLike, t: ReassemblyTree) -> list[str]:
    """Diagnostics for every way ``t`` fails to be a reassembling of ``g``."""
    problems: list[str] = []
    size = t.size
    if not (0 <= t.root < size):
        return ["root id out of range"]
    if len(t.leaf) != size:
        return ["leaf table length differs from node table"]
    seen_parent: dict[int, int] = {}
    for x, ch in enumerate(t.children):
        if ch is None:
            if t.leaf[x] is None:
                problems.append(f"leaf node {x} carries no vertex")
            continue
        if t.leaf[x] is not None:
            problems.append(f"internal node {x} carries a vertex")
        if len(ch) != 2 or ch[0] == ch[1]:
            problems.append(f"node {x} does not have two distinct children")
            continue
        for c in ch:
            if not (0 <= c < size):
                problems.append(f"node {x} has child {c} out of range")
            elif c in seen_parent:
                problems.append(f"node {c} has two parents")
            else:
                seen_parent[c] = x
    if problems:
        return problems
    if t.root in seen_parent:
        return ["root has a parent"]
    # reachability from the root also rules out cycles
    reach, stack = set(), [t.root]
    while stack:
        x = stack.pop()
        if x in reach:
            return ["tree contains a cycle"]
        reach.add(x)
        ch = t.children[x]
        if ch is not None:
            stack.extend(ch)
    if len(reach) != size:
        problems.append("some nodes are unreachable from the root")
    leaves = [t.leaf[x] for x in reach if t.children[x] is None]
    if len(set(leaves)) != len(leaves):
        problems.append("a vertex appears in two leaves")
    if any(not (0 <= v < g.n) for v in leaves):
        problems.append("leaf vertex outside the graph")
    if set(leaves) != set(range(g.n)):
        problems.append("leaf cover incomplete")
    if not problems and size != 2 * g.n - 1:
        problems.append(f"expected {2 * g.n - 1} nodes, found {size}")
    return problems


def validate_tree(g: GraphLike, t: ReassemblyTree) -> bool:
    return not tree_problems(g, t)


@dataclass(frozen=True)
class AlphaReport:
    alpha: int
    argmax_node: int  # post-order index
    per_node: tuple[int, ...]  # boundary by post-order index


def boundaries(g: GraphLike, t: ReassemblyTree) -> dict[int, int]:
    """Boundary size of every node keyed by node id.

    Each edge adds one at both leaves and subtracts two at the lowest common
    ancestor; subtree sums then count edges leaving each cluster.
    """
    par = t.parents()
    depth = {t.root: 0}
    order = t.postorder()
    for x in reversed(order):
        if x != t.root:
            depth[x] = depth[par[x]] + 1
    leaf_node = {t.leaf[x]: x for x in order if t.children[x] is None}
    acc = {x: 0 for x in order}
    for u, v in g.edges:
        a, b = leaf_node[u], leaf_node[v]
        acc[a] += 1
        acc[b] += 1
        while depth[a] > depth[b]:
            a = par[a]
        while depth[b] > depth[a]:
            b = par[b]
        while a != b:
            a, b = par[a], par[b]
        acc[a] -= 2
    for x in order:
        if x != t.root:
            acc[par[x]] += acc[x]
    return acc


def alpha_measure(g: GraphLike, t: ReassemblyTree) -> AlphaReport:
    problems = tree_problems(g, t)
    if problems:
        raise InvalidTree("; ".join(problems))
    bd = boundaries(g, t)
    per = tuple(bd[x] for x in t.postorder())
    alpha = max(per)
    return AlphaReport(alpha, per.index(alpha), per)


# -- serialization --------------------------------------------------------------


def tree_to_json(t: ReassemblyTree, alpha: int | None = None) -> dict:
    order = t.postorder()
    pid = {x: i for i, x in enumerate(order)}
    nodes = []
    for x in order:
        ch = t.children[x]
        if ch is None:
            nodes.append({"id": pid[x], "leaf": t.leaf[x]})
        else:
            nodes.append({"id": pid[x], "children": [pid[ch[0]], pid[ch[1]]]})
    out: dict = {"n": (len(order) + 1) // 2, "nodes": nodes}
    if alpha is not None:
        out["alpha"] = alpha
    return out


def tree_from_json(data: dict) -> ReassemblyTree:
    try:
        nodes = sorted(data["nodes"], key=lambda r: r["id"])
        ids = [int(r["id"]) for r in nodes]
        if ids != list(range(len(ids))):
            raise ParseError("node ids must be exactly 0..N-1")
        children: list[tuple[int, int] | None] = []
        leaf: list[int | None] = []
        has_parent = set()
        for r in nodes:
            if "children" in r:
                a, b = r["children"]
                children.append((int(a), int(b)))
                leaf.append(None)
                has_parent.update((int(a), int(b)))
            else:
                children.append(None)
                leaf.append(int(r["leaf"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed tree JSON: {exc}") from exc
    roots = [i for i in ids if i not in has_parent]
    if len(roots) != 1:
        raise ParseError(f"expected one root, found {len(roots)}")
    return ReassemblyTree(tuple(children), tuple(leaf), roots[0])


# -- carvings -------------------------------------------------------------------


@dataclass(frozen=True)
class RoutingTree:
    """Unrooted tree with the graph's vertices at its leaves."""

    adj: dict[int, tuple[int, ...]]
    leaf: dict[int, int]  # node -> vertex

    def branches(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a, nb in self.adj.items() for b in nb if a < b)

    def problems(self, n: int) -> list[str]:
        out = []
        for x, nb in self.adj.items():
            if x in self.leaf and len(nb) != 1:
                out.append(f"leaf node {x} has degree {len(nb)}")
            if x not in self.leaf and len(nb) != 3:
                out.append(f"internal node {x} has degree {len(nb)}")
        if sorted(self.leaf.values()) != list(range(n)):
            out.append("leaf cover incomplete")
        if len(self.branches()) != len(self.adj) - 1:
            out.append("not a tree")
        return out


def carving_to_json(T: RoutingTree) -> dict:
    ids = {x: i for i, x in enumerate(sorted(T.adj))}
    nodes = []
    for x, i in ids.items():
        row: dict = {"id": i}
        if x in T.leaf:
            row["leaf"] = T.leaf[x]
        nodes.append(row)
    return {"nodes": nodes, "branches": sorted([ids[a], ids[b]] for a, b in T.branches())}


def carving_from_json(data: dict) -> RoutingTree:
    try:
        adj: dict[int, list[int]] = {int(r["id"]): [] for r in data["nodes"]}
        leaf = {int(r["id"]): int(r["leaf"]) for r in data["nodes"] if "leaf" in r}
        for a, b in data["branches"]:
            adj[int(a)].append(int(b))
            adj[int(b)].append(int(a))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed carving JSON: {exc}") from exc
    return RoutingTree({x: tuple(nb) for x, nb in adj.items()}, leaf)


def tree_to_carving(t: ReassemblyTree) -> RoutingTree:
    """Drop the root and join its two children by a single branch."""
    ch = t.children[t.root]
    if ch is None:
        raise TooSmall("a single-vertex tree has no carving")
    adj: dict[int, list[int]] = {}
    for x, c in enumerate(t.children):
        if x == t.root or c is None:
            continue
        for y in c:
            adj.setdefault(x, []).append(y)
            adj.setdefault(y, []).append(x)
    a, b = ch
    adj.setdefault(a, []).append(b)
    adj.setdefault(b, []).append(a)
    leaf = {x: v for x, v in enumerate(t.leaf) if v is not None}
    return RoutingTree({x: tuple(nb) for x, nb in adj.items()}, leaf)


def root_at_branch(T: RoutingTree, a: int, b: int) -> ReassemblyTree:
    """Orient ``T`` away from a new root placed on branch ``a``-``b``."""
    ids = {x: i for i, x in enumerate(sorted(T.adj))}
    root = len(ids)
    children: list[tuple[int, int] | None] = [None] * (root + 1)
    leaf: list[int | None] = [None] * (root + 1)
    children[root] = (ids[a], ids[b])
    stack = [(a, b), (b, a)]
    while stack:
        x, frm = stack.pop()
        if x in T.leaf:
            leaf[ids[x]] = T.leaf[x]
            continue
        down = [y for y in T.adj[x] if y != frm]
        if len(down) != 2:
            raise InvalidTree(f"routing node {x} is not cubic")
        children[ids[x]] = (ids[down[0]], ids[down[1]])
        stack.extend((y, x) for y in down)
    return ReassemblyTree(tuple(children), tuple(leaf), root)


def carving_to_trees(T: RoutingTree) -> Iterator[ReassemblyTree]:
    """One rooted tree per branch of ``T``."""
    for a, b in T.branches():
        yield root_at_branch(T, a, b)


def carving_width(g: GraphLike, T: RoutingTree) -> int:
    """Largest edge cut over the branches of ``T``."""
    branches = T.branches()
    if not branches:
        return 0
    t = root_at_branch(T, *branches[0])
    bd = boundaries(g, t)
    return max(v for x, v in bd.items() if x != t.root)


# -- removal of merges between non-adjacent clusters ---------------------------


def _cross(g: GraphLike, x: int, y: int) -> int:
    return sum(1 for u, v in g.edges if ((x >> u) & 1 and (y >> v) & 1) or ((x >> v) & 1 and (y >> u) & 1))


def _bd(g: GraphLike, x: int) -> int:
    return sum(1 for u, v in g.edges if ((x >> u) & 1) != ((x >> v) & 1))


def _connected(g: GraphLike) -> bool:
    if g.n <= 1:
        return True
    adj: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen, stack = {0}, [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == g.n


def normalize_no_zero_merges(g: GraphLike, t: ReassemblyTree) -> ReassemblyTree:
    """Rearrange ``t`` so that every merge joins clusters sharing an edge.

    Repeatedly take a zero merge ``X1 + X2`` closest to the root and walk up
    the chain of ancestors ``A_j = A_{j-1} + X_j`` to the first ``X_k``
    adjacent to ``X2``. ``X2`` then leaves the chain and rejoins either
    paired with ``X_k`` or right after ``X_k``, whichever does not raise any
    boundary. Each step removes the chosen zero merge and can only create a
    new one strictly closer to the root, so the loop terminates.
    """
    problems = tree_problems(g, t)
    if problems:
        raise InvalidTree("; ".join(problems))
    if not _connected(g):
        raise Disconnected("graph is not connected")

    children: dict[int, list[int]] = {x: list(c) for x, c in enumerate(t.children) if c is not None}
    leaf = {x: v for x, v in enumerate(t.leaf) if v is not None}
    next_id = t.size
    root = t.root

    def masks() -> tuple[dict[int, int], dict[int, int], dict[int, int]]:
        mask: dict[int, int] = {}
        par: dict[int, int] = {}
        depth = {root: 0}
        stack = [root]
        order = []
        while stack:
            x = stack.pop()
            order.append(x)
            for c in children.get(x, ()):
                par[c] = x
                depth[c] = depth[x] + 1
                stack.append(c)
        for x in reversed(order):
            mask[x] = (1 << leaf[x]) if x in leaf else mask[children[x][0]] | mask[children[x][1]]
        return mask, par, depth

    for _ in range(4 * g.n * g.n + 10):
        mask, par, depth = masks()
        zeros = [x for x, (a, b) in children.items() if _cross(g, mask[a], mask[b]) == 0]
        if not zeros:
            break
        a2 = min(zeros, key=lambda x: (depth[x], x))
        x1, x2 = children[a2]
        if a2 == root:  # pragma: no cover - impossible for a connected graph
            raise Disconnected("root merge shares no edge")
        x3 = next(c for c in children[par[a2]] if c != a2)
        if _cross(g, mask[x1], mask[x3]) == 0:
            x1, x2 = x2, x1
        # chain of ancestors and the clusters they absorb
        chain = [a2]
        absorbed = []
        node = a2
        while True:
            up = par[node]
            sib = next(c for c in children[up] if c != node)
            chain.append(up)
            absorbed.append(sib)
            if _cross(g, mask[x2], mask[sib]) >= 1:
                break
            node = up
        xk = absorbed[-1]
        top = chain[-1]
        m2k = _cross(g, mask[x2], mask[xk])
        bd2 = _bd(g, mask[x2])
        # rebuild: W = X1 + X3 + ... + X_{k-1}
        w = x1
        for xj in absorbed[:-1]:
            children[next_id] = [w, xj]
            w = next_id
            next_id += 1
        for x in chain[:-1]:
            del children[x]
        if 2 * m2k > bd2:
            children[next_id] = [x2, xk]
            children[top] = [w, next_id]
            next_id += 1
        else:
            children[next_id] = [w, xk]
            children[top] = [next_id, x2]
            next_id += 1
    else:  # pragma: no cover - the loop is proven to terminate
        raise InvalidTree("normalization did not converge")

    b = TreeBuilder()

    def emit(x: int) -> int:
        stack: list[tuple[int, bool]] = [(x, False)]
        made: dict[int, int] = {}
        while stack:
            y, done = stack.pop()
            if y in leaf:
                made[y] = b.leaf(leaf[y])
            elif done:
                c0, c1 = children[y]
                made[y] = b.join(made[c0], made[c1])
            else:
                stack.append((y, True))
                stack.append((children[y][1], False))
                stack.append((children[y][0], False))
        return made[x]

    return b.build(emit(root))
