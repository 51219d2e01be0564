use roxmltree::{Document, Node};

use super::text::infer_primitive_text;
use super::{IngestConfig, IngestError, Location, SourceFormat};
use crate::data::{DataValue, Record, BULLET};

/// Elements become records named by their tag. Attributes are fields; the
/// body goes into the `•` field, either as a list of child element records
/// or, when there are no child elements, as the typed text content.
pub fn parse_xml(text: &str, cfg: &IngestConfig) -> Result<DataValue, IngestError> {
    let doc = Document::parse(text).map_err(|e| {
        let pos = e.pos();
        IngestError::MalformedDocument {
            format: SourceFormat::Xml,
            location: Location::Text { line: pos.row as usize, column: pos.col as usize },
            message: e.to_string(),
        }
    })?;
    Ok(element(doc.root_element(), cfg))
}

fn element(node: Node<'_, '_>, cfg: &IngestConfig) -> DataValue {
    let mut fields: Vec<(String, DataValue)> =
        node.attributes().map(|a| (a.name().to_string(), infer_primitive_text(a.value(), cfg))).collect();

    let children: Vec<DataValue> = node.children().filter(|c| c.is_element()).map(|c| element(c, cfg)).collect();
    if !children.is_empty() {
        fields.push((BULLET.to_string(), DataValue::List(children)));
    } else {
        let content: String = node.children().filter(|c| c.is_text()).filter_map(|c| c.text()).collect();
        let content = content.trim();
        if !content.is_empty() {
            fields.push((BULLET.to_string(), infer_primitive_text(content, cfg)));
        }
    }
    DataValue::Record(Record::new(node.tag_name().name(), fields))
}
