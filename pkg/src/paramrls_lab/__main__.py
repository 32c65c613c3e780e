from paramrls_lab import main

main()
