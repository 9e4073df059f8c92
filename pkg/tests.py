import unittest

import coverage

if __name__ == "__main__":
    # Start coverage collection, limited to the package
    cov = coverage.Coverage(source=["hiddenflows"])
    cov.start()

    # Load all tests from the 'tests' package
    suite = unittest.defaultTestLoader.discover("./tests", pattern="test_*.py")

    # Run the tests
    unittest.TextTestRunner().run(suite)

    # Stop coverage collection
    cov.stop()
    cov.save()

    # Report the coverage
    cov.report(show_missing=True)
