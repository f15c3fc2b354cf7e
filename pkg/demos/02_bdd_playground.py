"""Poke at the BDD engine: canonical handles, quantification, DOT export.

Because nodes are hash-consed and reduced on construction, any two routes
to the same Boolean function end at the same integer handle, so semantic
equality is just ``==`` on handles.
"""

from citbdd import BddManager, Op


def main():
    mgr = BddManager(4)
    x0, x1, x2, x3 = (mgr.mk_var(i) for i in range(4))

    # Same function, two construction orders, one handle.
    left = mgr.apply(Op.AND, x0, mgr.apply(Op.OR, x1, x2))
    right = mgr.apply(Op.OR, mgr.apply(Op.AND, x0, x1), mgr.apply(Op.AND, x0, x2))
    print(f"distributivity gives identical handles: {left} == {right}")

    # Negation is an involution that lands back on the original handle.
    print(f"double negation: {mgr.negate(mgr.negate(left)) == left}")

    # Existential quantification: does some value of x1 satisfy the function?
    f = mgr.apply(Op.AND, x1, mgr.apply(Op.XOR, x0, x3))
    quantified = mgr.exists(mgr.mk_var(1), f)
    print(f"after quantifying x1, x1 is gone: "
          f"{mgr.exists(mgr.mk_var(1), quantified) == quantified}")
    print(f"exists x1 (x1 and (x0 xor x3)) == (x0 xor x3): "
          f"{quantified == mgr.apply(Op.XOR, x0, x3)}")

    # Count satisfying valuations and evaluate by one traversal.
    print(f"solutions of (x0 or x1): "
          f"{mgr.count_solutions(mgr.apply(Op.OR, x0, x1))} of 16")
    print(f"eval at 0101: {mgr.eval(f, [0, 1, 0, 1])}")

    # DOT output for inspection; dotted edges are 0-branches.
    print("\nDOT for x0 and not x3:")
    print(mgr.to_dot(mgr.apply(Op.AND, x0, mgr.negate(x3))))


if __name__ == "__main__":
    main()
