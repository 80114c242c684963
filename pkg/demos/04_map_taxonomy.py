"""Map free text to taxonomy codes at different thresholds.

Uses the bundled computing-terms sample; raising the threshold narrows the
result set (results are nested by threshold).
"""

from teamrec.taxonomy import map_text, sample_taxonomy

TEXT = (
    "We study machine learning methods for intrusion detection in computer "
    "communication networks, with pattern recognition over network traffic."
)


def main() -> None:
    taxonomy = sample_taxonomy()
    print(f"taxonomy: {taxonomy.name} ({len(taxonomy)} terms)")
    print(f"text: {TEXT}\n")
    for threshold in (40, 25, 15):
        results = map_text(TEXT, threshold, taxonomy)
        print(f"threshold {threshold}: {len(results)} code(s)")
        for code, term, score in results[:8]:
            print(f"  {code:<8}{score:>4}  {term}")
        print()


if __name__ == "__main__":
    main()
