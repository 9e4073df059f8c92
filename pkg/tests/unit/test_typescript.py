import unittest

from hiddenflows.analysis import parse_js, strip_types

CLASS_SOURCE = """class Greeter {
    greeting: string;
    constructor(message: string) {
        this.greeting = message;
    }
    greet(name: string): string {
        return "Hello, " + name;
    }
}
"""


class TestStripTypes(unittest.TestCase):
    def assertShapeKept(self, source, stripped):
        self.assertEqual(len(stripped), len(source))
        self.assertEqual(
            [i for i, c in enumerate(stripped) if c == "\n"],
            [i for i, c in enumerate(source) if c == "\n"],
        )
        self.assertEqual(parse_js(stripped).parse_errors, [])

    def test_variable_annotation(self):
        source = 'const name: string = "x";'
        stripped = strip_types(source)
        self.assertShapeKept(source, stripped)
        self.assertEqual(stripped.split(), ["const", "name", "=", '"x";'])

    def test_interface_is_removed(self):
        source = "interface Options {\n  host: string;\n}\nconst o = 1;\n"
        stripped = strip_types(source)
        self.assertShapeKept(source, stripped)
        self.assertEqual(stripped.strip(), "const o = 1;")

    def test_parameter_and_return_types(self):
        source = "function f(a: number, b?: string): number {\n    return a;\n}\n"
        stripped = strip_types(source)
        self.assertShapeKept(source, stripped)
        self.assertNotIn("number", stripped)
        self.assertNotIn("?", stripped)
        self.assertEqual(len(parse_js(stripped).body[0].params), 2)

    def test_class_members(self):
        stripped = strip_types(CLASS_SOURCE)
        self.assertShapeKept(CLASS_SOURCE, stripped)
        self.assertNotIn("string", stripped)
        self.assertIn("this.greeting = message;", stripped)

    def test_generic_call(self):
        source = "const m = new Map<string, number>();"
        stripped = strip_types(source)
        self.assertShapeKept(source, stripped)
        self.assertNotIn("<", stripped)

    def test_type_assertion(self):
        source = 'const el = document.getElementById("x") as HTMLElement;'
        stripped = strip_types(source)
        self.assertShapeKept(source, stripped)
        self.assertNotIn("HTMLElement", stripped)

    def test_export_assignment(self):
        source = "function MyNode() {}\nexport = MyNode;\n"
        stripped = strip_types(source)
        self.assertShapeKept(source, stripped)
        self.assertIn("exports=", stripped)

    def test_plain_javascript_is_unchanged(self):
        source = "var a = b ? c : d;\nfunction g(x) { return x; }\n"
        self.assertEqual(strip_types(source), source)


if __name__ == "__main__":
    unittest.main()
