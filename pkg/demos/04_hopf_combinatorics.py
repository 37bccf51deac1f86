"""Inside the enveloping algebra: normal forms, the coproduct, and the
second product.

Shows sorted-word normal forms, unshuffling and the antipode, the
twisted star product built from an r-matrix, and the letter map that
turns concatenation into star multiplication - whose term counts are the
set-partition numbers.
"""

from postlie import enveloping as ev
from postlie import products, rmatrix

ORDER = 5


def main():
    ctx = rmatrix.builtin_rmatrix("sl2-borel")
    L = ctx.algebra
    prod = products.from_rmatrix(ctx, "-")
    e, h, f = (ev.letter(L, ORDER, i) for i in range(3))

    print("normal forms (letters sort as e < h < f):")
    print("  f.e      ->", ev.render(ev.env_mul(f, e)))
    print("  f.h.e    ->", ev.render(ev.env_mul(ev.env_mul(f, h), e)))

    A = ev.env_mul(e, f)
    print("\ncoproduct of", ev.render(A), "splits as:")
    for (wl, wr), c in sorted(ev.coproduct(A).terms.items()):
        print("   %s  (x)  %s   coefficient %s"
              % (_word(L, wl), _word(L, wr), c))
    print("antipode:", ev.render(ev.antipode(A)))

    print("\nstar product vs plain product on letters:")
    print("  f.e =", ev.render(ev.env_mul(f, e)))
    print("  f*e =", ev.render(ev.star_mul(f, e, prod)),
          " (the product term f |> e = h cancels the reordering term)")

    print("\nexp/log round trip for a letter:")
    X = ev.exp(e)
    print("  exp(e) =", ev.render(X))
    print("  log(exp(e)) =", ev.render(ev.log(X)))

    print("\nletter map on growing words (term counts = partition numbers):")
    for n in range(1, 6):
        word = tuple(i % 3 for i in range(n))
        img = ev.phi(L, word, prod, ORDER)
        print("  length %d: %2d terms (closed count %d)"
              % (n, len([c for c in img.terms.values() if c != 0]),
                 ev.phi_term_count(n)))


def _word(L, w):
    return "·".join(L.labels[i] for i in w) if w else "1"


if __name__ == "__main__":
    main()
