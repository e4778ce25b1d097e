"""Time the compiled kernels against the pure-Python ones.

    python benchmarks/bench_kernels.py [--repeat 3] [--n-max 14]

Prints one line per workload with the best time of each backend and the speedup.
"""
import argparse
import timeit

from treecontours import kernels
from treecontours.counters import dary_series
from treecontours.enumerator import grammar_depth
from treecontours.tree import dary_grammar, expand_grammar, regular_grammar


def csr(t):
    offsets = [0]
    kids = []
    for ch in t.children:
        kids.extend(ch)
        offsets.append(len(kids))
    return offsets, kids, list(t.open_end)


def workloads(n_max):
    for name, g in (("binary", dary_grammar(2)), ("ternary", dary_grammar(3)), ("regular4", regular_grammar(4))):
        t = expand_grammar(g, grammar_depth(g, n_max))
        args = (*csr(t), t.root, n_max)
        yield f"count_boundaries {name} n<={n_max} ({len(t)} vertices)", "count_boundaries", args
    a = list(dary_series(2, 400).coeffs)
    yield "convolve binary series, order 400", "convolve", (a, a, 400)
    yield "conv_coeff binary series, n=400", "conv_coeff", (a, a, 400)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--n-max", type=int, default=14)
    args = ap.parse_args(argv)
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled backend not built; only timing pure Python")
    for label, fn, fargs in workloads(args.n_max):
        times = {}
        results = {}
        for name, mod in backends.items():
            f = getattr(mod, fn)
            results[name] = f(*fargs)
            times[name] = min(timeit.repeat(lambda: f(*fargs), number=1, repeat=args.repeat))
        assert len({repr(r) for r in results.values()}) == 1, f"backends disagree on {label}"
        line = f"{label:55s} " + " ".join(f"{k}={v * 1e3:9.2f}ms" for k, v in times.items())
        if "cython" in times:
            line += f"  speedup x{times['python'] / times['cython']:.1f}"
        print(line)


if __name__ == "__main__":
    main()
