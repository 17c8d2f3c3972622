from composite_dna.cli import main

main()
