"""Connection matrices of the square-with-diagonal example under both reductions."""

from conley import (boundary_matrix, build_complex, conmat, connectmat, downset_function,
                    filtered_order, minimum_morse_decomposition, morse_persistence)
from conley.mvf import MultivectorField

NAMES = {(0,): "A", (1,): "B", (2,): "C", (3,): "D", (0, 1): "AB", (1, 2): "BC", (2, 3): "CD",
         (0, 3): "DA", (0, 2): "CA", (0, 1, 2): "ABC", (0, 2, 3): "CDA"}


def main():
    K = build_complex([(0, 1, 2), (0, 2, 3)])
    n = {name: K.id_of(v) for v, name in NAMES.items()}
    F = MultivectorField.from_vectors(len(K), [
        [n["A"], n["AB"]], [n["B"], n["BC"]], [n["C"], n["CD"]], [n["D"], n["DA"]],
        [n["CA"]], [n["ABC"]], [n["CDA"]]])
    md = minimum_morse_decomposition(K, F)
    label = lambda s: NAMES[K.vertices_of(s)]  # noqa: E731
    print("Morse sets:")
    for p, m in enumerate(md.sets):
        print(f"  {p}: {' '.join(sorted(label(s) for s in m))}")
    A = boundary_matrix(K, filtered_order(K, md))
    for algo in (conmat, connectmat):
        _, cm = algo(A)
        kept = [label(s) for s in cm.simplices]
        entries = sorted(f"{kept[i]}->{kept[j]}" for i, j in cm.entries())
        print(f"{algo.__name__}: basis {kept}; entries {entries}")
    bc = morse_persistence(K, md, downset_function(md))
    print("barcode (downset function):")
    print(bc.to_csv(), end="")


if __name__ == "__main__":
    main()
